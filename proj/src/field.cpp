#include "glvortex/field.hpp"

#include <algorithm>
#include <cmath>

#include "glvortex/errors.hpp"

namespace glvortex {

ScalarField::ScalarField(GridPtr grid, double fill) : grid_(std::move(grid)) {
  v_.assign(grid_->node_count(), 0.0);
  if (fill != 0.0)
    for (int k = 0; k < grid_->node_count(); ++k)
      if (grid_->valued(k)) v_[k] = fill;
}

ScalarField ScalarField::sample(GridPtr grid, const PointFn& f) {
  ScalarField out(grid);
  for (int k : grid->interior_nodes()) out.v_[k] = f(grid->point(k));
  for (int k : grid->ghost_nodes()) out.v_[k] = f(grid->point(k));
  return out;
}

void ScalarField::require_same_grid(const ScalarField& o) const {
  if (grid_ != o.grid_) throw ConfigError("fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(o);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(o);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  for (double& x : v_) x *= c;
  return *this;
}

ScalarField& ScalarField::operator+=(double c) {
  for (int k = 0; k < grid_->node_count(); ++k)
    if (grid_->valued(k)) v_[k] += c;
  return *this;
}

double ScalarField::max_interior() const {
  double m = -INFINITY;
  for (int k : grid_->interior_nodes()) m = std::max(m, v_[k]);
  return m;
}

double ScalarField::min_interior() const {
  double m = INFINITY;
  for (int k : grid_->interior_nodes()) m = std::min(m, v_[k]);
  return m;
}

double ScalarField::max_abs_interior() const {
  double m = 0.0;
  for (int k : grid_->interior_nodes()) m = std::max(m, std::abs(v_[k]));
  return m;
}

bool ScalarField::finite() const {
  for (int k = 0; k < grid_->node_count(); ++k)
    if (grid_->valued(k) && !std::isfinite(v_[k])) return false;
  return true;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

std::vector<double> boundary_values(const Grid& grid, const PointFn& g) {
  std::vector<double> out;
  out.reserve(grid.cuts().size());
  for (const Cut& c : grid.cuts()) out.push_back(g(c.point));
  return out;
}

namespace {

double quad_at(double x0, double x1, double x2, double f0, double f1, double f2, double x) {
  const double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  return l0 * f0 + l1 * f1 + l2 * f2;
}

}  // namespace

void fill_ghosts(ScalarField& f, const std::vector<double>* bvals) {
  const Grid& g = f.grid();
  auto& v = f.values();
  const int n = g.node_count();
  std::vector<unsigned char> known(n, 0);
  for (int k : g.interior_nodes()) known[k] = 1;
  std::vector<double> acc(n, 0.0);
  std::vector<int> cnt(n, 0);

  auto interior_at = [&](int i, int j) { return g.in_box(i, j) && g.interior(g.index(i, j)); };

  const auto& cuts = g.cuts();
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    const Cut& cut = cuts[c];
    const int i = g.ix(cut.node), j = g.iy(cut.node);
    const int dx = kDirX[cut.dir], dy = kDirY[cut.dir];
    const int q = g.index(i + dx, j + dy);
    if (g.kind(q) != NodeKind::ghost) continue;
    const double u0 = v[cut.node];
    const bool has1 = interior_at(i - dx, j - dy), has2 = has1 && interior_at(i - 2 * dx, j - 2 * dy);
    const double u1 = has1 ? v[g.index(i - dx, j - dy)] : 0.0;
    const double u2 = has2 ? v[g.index(i - 2 * dx, j - 2 * dy)] : 0.0;
    double est;
    if (bvals) {
      const double gb = (*bvals)[c], th = cut.theta;
      if (has1 && (th >= 0.25 || !has2)) est = quad_at(-1.0, 0.0, th, u1, u0, gb, 1.0);
      else if (has2) est = quad_at(-2.0, -1.0, th, u2, u1, gb, 1.0);
      else est = th >= 0.25 ? u0 + (gb - u0) / th : u0;
    } else {
      est = has2 ? 3.0 * u0 - 3.0 * u1 + u2 : has1 ? 2.0 * u0 - u1 : u0;
    }
    acc[q] += est;
    ++cnt[q];
  }
  for (int q : g.ghost_nodes())
    if (cnt[q] > 0) {
      v[q] = acc[q] / cnt[q];
      known[q] = 1;
    }

  extrapolate(f, known);
}

void extrapolate(ScalarField& f, std::vector<unsigned char>& known) {
  const Grid& g = f.grid();
  auto& v = f.values();
  std::vector<int> targets;
  for (const auto* list : {&g.interior_nodes(), &g.ghost_nodes()})
    for (int q : *list)
      if (!known[q]) targets.push_back(q);
  for (int pass = 0; pass < 12; ++pass) {
    std::vector<std::pair<int, double>> fresh;
    for (int q : targets) {
      if (known[q]) continue;
      const int i = g.ix(q), j = g.iy(q);
      double sum = 0.0;
      int m = 0;
      for (int dir = 0; dir < 4; ++dir) {
        const int dx = kDirX[dir], dy = kDirY[dir];
        auto kn = [&](int s) {
          return g.in_box(i + s * dx, j + s * dy) && known[g.index(i + s * dx, j + s * dy)];
        };
        auto val = [&](int s) { return v[g.index(i + s * dx, j + s * dy)]; };
        if (!kn(1)) continue;
        if (kn(2) && kn(3)) sum += 3.0 * val(1) - 3.0 * val(2) + val(3);
        else if (kn(2)) sum += 2.0 * val(1) - val(2);
        else sum += val(1);
        ++m;
      }
      if (m > 0) fresh.emplace_back(q, sum / m);
    }
    if (fresh.empty()) break;
    for (auto& [q, val] : fresh) {
      v[q] = val;
      known[q] = 1;
    }
  }
  for (int q : targets) {
    if (known[q]) continue;
    const int i = g.ix(q), j = g.iy(q);
    double sum = 0.0;
    int m = 0;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (!g.in_box(i + di, j + dj)) continue;
        const int r = g.index(i + di, j + dj);
        if (known[r]) {
          sum += v[r];
          ++m;
        }
      }
    v[q] = m ? sum / m : 0.0;
  }
}

VectorField gradient_field(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out{ScalarField(f.grid_ptr()), ScalarField(f.grid_ptr())};
  const double h = g.h();
  auto one = [&](int k, int dx, int dy) {
    const int i = g.ix(k), j = g.iy(k);
    const bool p = g.in_box(i + dx, j + dy) && g.valued(g.index(i + dx, j + dy));
    const bool m = g.in_box(i - dx, j - dy) && g.valued(g.index(i - dx, j - dy));
    if (p && m) return (f[g.index(i + dx, j + dy)] - f[g.index(i - dx, j - dy)]) / (2.0 * h);
    if (p) return (f[g.index(i + dx, j + dy)] - f[k]) / h;
    if (m) return (f[k] - f[g.index(i - dx, j - dy)]) / h;
    return 0.0;
  };
  for (const auto* list : {&g.interior_nodes(), &g.ghost_nodes()})
    for (int k : *list) {
      out.x[k] = one(k, 1, 0);
      out.y[k] = one(k, 0, 1);
    }
  return out;
}

double integrate(const ScalarField& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int k : g.interior_nodes()) s += g.weight(k) * f[k];
  return s;
}

namespace {

double keys(double s) {
  s = std::abs(s);
  if (s < 1.0) return (1.5 * s - 2.5) * s * s + 1.0;
  if (s < 2.0) return ((-0.5 * s + 2.5) * s - 4.0) * s + 2.0;
  return 0.0;
}

double keys_d(double s) {
  const double sg = s < 0 ? -1.0 : 1.0;
  s = std::abs(s);
  if (s < 1.0) return sg * (4.5 * s - 5.0) * s;
  if (s < 2.0) return sg * ((-1.5 * s + 5.0) * s - 4.0);
  return 0.0;
}

struct Stencil {
  int i, j;
  double tx, ty;
};

Stencil locate(const ScalarField& f, const Vec2& p) {
  const Grid& g = f.grid();
  if (!(signed_distance(g.spec(), p) > 0.0)) throw DomainError("point outside the domain");
  const double sx = (p.x() - g.x0()) / g.h(), sy = (p.y() - g.y0()) / g.h();
  Stencil s{static_cast<int>(std::floor(sx)), static_cast<int>(std::floor(sy)), 0.0, 0.0};
  s.tx = sx - s.i;
  s.ty = sy - s.j;
  return s;
}

bool cubic_ok(const Grid& g, const Stencil& s) {
  for (int b = -1; b <= 2; ++b)
    for (int a = -1; a <= 2; ++a)
      if (!g.in_box(s.i + a, s.j + b) || !g.valued(g.index(s.i + a, s.j + b))) return false;
  return true;
}

// value, d/dx, d/dy
std::array<double, 3> eval(const ScalarField& f, const Vec2& p) {
  const Grid& g = f.grid();
  const Stencil s = locate(f, p);
  const double h = g.h();
  if (cubic_ok(g, s)) {
    double wx[4], wy[4], dwx[4], dwy[4];
    for (int a = 0; a < 4; ++a) {
      wx[a] = keys(s.tx - (a - 1));
      dwx[a] = keys_d(s.tx - (a - 1));
      wy[a] = keys(s.ty - (a - 1));
      dwy[a] = keys_d(s.ty - (a - 1));
    }
    double v = 0.0, gx = 0.0, gy = 0.0;
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) {
        const double u = f[g.index(s.i + a - 1, s.j + b - 1)];
        v += wx[a] * wy[b] * u;
        gx += dwx[a] * wy[b] * u;
        gy += wx[a] * dwy[b] * u;
      }
    return {v, gx / h, gy / h};
  }
  for (int b = 0; b <= 1; ++b)
    for (int a = 0; a <= 1; ++a)
      if (!g.in_box(s.i + a, s.j + b) || !g.valued(g.index(s.i + a, s.j + b)))
        throw DomainError("interpolation stencil leaves the grid band");
  const double u00 = f[g.index(s.i, s.j)], u10 = f[g.index(s.i + 1, s.j)];
  const double u01 = f[g.index(s.i, s.j + 1)], u11 = f[g.index(s.i + 1, s.j + 1)];
  const double tx = s.tx, ty = s.ty;
  const double v = (1 - tx) * (1 - ty) * u00 + tx * (1 - ty) * u10 + (1 - tx) * ty * u01 + tx * ty * u11;
  const double gx = ((1 - ty) * (u10 - u00) + ty * (u11 - u01)) / h;
  const double gy = ((1 - tx) * (u01 - u00) + tx * (u11 - u10)) / h;
  return {v, gx, gy};
}

}  // namespace

double interpolate(const ScalarField& f, const Vec2& p) { return eval(f, p)[0]; }

Vec2 interpolate_gradient(const ScalarField& f, const Vec2& p) {
  const auto e = eval(f, p);
  return {e[1], e[2]};
}

}  // namespace glvortex
