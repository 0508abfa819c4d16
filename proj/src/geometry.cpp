#include "glvortex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "glvortex/errors.hpp"

namespace glvortex {

DomainSpec DomainSpec::disk(double radius) {
  DomainSpec s{DomainKind::disk, radius, radius};
  s.validate();
  return s;
}

DomainSpec DomainSpec::ellipse(double a, double b) {
  DomainSpec s{DomainKind::ellipse, a, b};
  s.validate();
  return s;
}

void DomainSpec::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw ConfigError("semi-axes must be positive and finite");
  if (kind == DomainKind::disk && a != b) throw ConfigError("a disk needs equal semi-axes");
}

double DomainSpec::area() const { return std::numbers::pi * a * b; }
double DomainSpec::diameter() const { return 2.0 * std::max(a, b); }

double DomainSpec::d0() const {
  if (kind == DomainKind::disk) return 0.5 * a;
  const double big = std::max(a, b), small = std::min(a, b);
  return small * small / (2.0 * big);
}

double DomainSpec::level(const Vec2& p) const {
  const double u = p.x() / a, v = p.y() / b;
  return u * u + v * v;
}

std::string DomainSpec::name() const { return kind == DomainKind::disk ? "disk" : "ellipse"; }

namespace {

// Nearest point on x^2/e0^2 + y^2/e1^2 = 1 to (y0, y1), first quadrant, e0 >= e1.
Vec2 nearest_first_quadrant(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double e0y0 = e0 * y0, e1y1 = e1 * y1;
      auto F = [&](double t, double& dF) {
        const double r0 = e0y0 / (t + e0 * e0), r1 = e1y1 / (t + e1 * e1);
        dF = -2.0 * (r0 * r0 / (t + e0 * e0) + r1 * r1 / (t + e1 * e1));
        return r0 * r0 + r1 * r1 - 1.0;
      };
      double lo = -e1 * e1 + e1y1;
      double hi = -e1 * e1 + std::hypot(e0y0, e1y1);
      double t = lo;
      for (int it = 0; it < 50; ++it) {
        double dF;
        const double f = F(t, dF);
        if (f > 0.0) lo = t;
        else hi = t;
        double tn = (dF < 0.0) ? t - f / dF : 0.5 * (lo + hi);
        if (!(tn >= lo && tn <= hi)) tn = 0.5 * (lo + hi);
        const bool done = std::abs(tn - t) <= 1e-12 * (1.0 + std::abs(t));
        t = tn;
        if (done || hi - lo <= 1e-15 * (1.0 + std::abs(t))) break;
      }
      return {e0 * e0 * y0 / (t + e0 * e0), e1 * e1 * y1 / (t + e1 * e1)};
    }
    return {0.0, e1};
  }
  const double denom = e0 * e0 - e1 * e1;
  if (denom > 0.0 && y0 < denom / e0) {
    const double x0 = e0 * e0 * y0 / denom;
    const double q = x0 / e0;
    return {x0, e1 * std::sqrt(std::max(0.0, 1.0 - q * q))};
  }
  return {e0, 0.0};
}

}  // namespace

DistanceInfo distance_info(const DomainSpec& spec, const Vec2& p) {
  DistanceInfo out;
  if (spec.kind == DomainKind::disk) {
    const double r = p.norm();
    out.d = spec.a - r;
    out.gradient = r > 0.0 ? Vec2(-p / r) : Vec2(0.0, 0.0);
    out.nearest = r > 0.0 ? Vec2(p * (spec.a / r)) : Vec2(spec.a, 0.0);
    return out;
  }
  const bool swap = spec.a < spec.b;
  const double e0 = swap ? spec.b : spec.a, e1 = swap ? spec.a : spec.b;
  const double px = swap ? p.y() : p.x(), py = swap ? p.x() : p.y();
  Vec2 q = nearest_first_quadrant(e0, e1, std::abs(px), std::abs(py));
  q.x() = std::copysign(q.x(), px);
  q.y() = std::copysign(q.y(), py);
  if (swap) std::swap(q.x(), q.y());
  out.nearest = q;
  const Vec2 diff = p - q;
  const double dist = diff.norm();
  const bool inside = spec.contains(p);
  out.d = inside ? dist : -dist;
  if (dist > 1e-14) {
    out.gradient = inside ? Vec2(diff / dist) : Vec2(-diff / dist);
  } else {
    Vec2 n(q.x() / (spec.a * spec.a), q.y() / (spec.b * spec.b));
    out.gradient = -n.normalized();
  }
  return out;
}

double signed_distance(const DomainSpec& spec, const Vec2& p) {
  if (spec.kind == DomainKind::disk) return spec.a - p.norm();
  return distance_info(spec, p).d;
}

double clipped_area(const DomainSpec& spec, double x0, double x1, double y0, double y1) {
  const double a = spec.a, b = spec.b;
  auto Y = [&](double x) {
    const double q = x / a;
    return q >= 1.0 || q <= -1.0 ? 0.0 : b * std::sqrt(1.0 - q * q);
  };
  // Antiderivative of Y.
  auto P = [&](double x) {
    x = std::clamp(x, -a, a);
    return (b / a) * (0.5 * x * std::sqrt(std::max(0.0, a * a - x * x)) + 0.5 * a * a * std::asin(x / a));
  };
  x0 = std::max(x0, -a);
  x1 = std::min(x1, a);
  if (x1 <= x0 || y1 <= y0) return 0.0;
  std::vector<double> br{x0, x1};
  for (double y : {y0, y1}) {
    if (std::abs(y) < b) {
      const double xb = a * std::sqrt(1.0 - (y / b) * (y / b));
      for (double c : {-xb, xb})
        if (c > x0 && c < x1) br.push_back(c);
    }
  }
  std::sort(br.begin(), br.end());
  double area = 0.0;
  for (std::size_t s = 0; s + 1 < br.size(); ++s) {
    const double l = br[s], r = br[s + 1];
    if (r <= l) continue;
    const double ym = Y(0.5 * (l + r));
    const bool upper_curve = ym < y1;
    const bool lower_curve = -ym > y0;
    const double up = upper_curve ? ym : y1;
    const double lo = lower_curve ? -ym : y0;
    if (up <= lo) continue;
    const double iy = P(r) - P(l);
    const double upper = upper_curve ? iy : y1 * (r - l);
    const double lower = lower_curve ? -iy : y0 * (r - l);
    area += upper - lower;
  }
  return std::max(area, 0.0);
}

Grid::Grid(const DomainSpec& spec, int resolution) : spec_(spec), resolution_(resolution) {
  spec_.validate();
  if (resolution < 16) throw ConfigError("resolution must be at least 16 nodes per unit length");
  h_ = 1.0 / resolution;
  const int mx = static_cast<int>(std::ceil(spec_.a * resolution)) + 4;
  const int my = static_cast<int>(std::ceil(spec_.b * resolution)) + 4;
  nx_ = 2 * mx + 1;
  ny_ = 2 * my + 1;
  x0_ = -mx * h_;
  y0_ = -my * h_;
  const int n = nx_ * ny_;
  kind_.assign(n, NodeKind::outside);
  unknown_.assign(n, -1);
  dist_.resize(n);
  weight_.assign(n, 0.0);
  first_cut_.assign(n, -1);

  for (int k = 0; k < n; ++k) {
    const Vec2 p = point(k);
    dist_[k] = signed_distance(spec_, p);
    if (spec_.contains(p)) {
      kind_[k] = NodeKind::interior;
      unknown_[k] = static_cast<int>(interior_.size());
      interior_.push_back(k);
    }
  }
  if (interior_.empty()) throw ConfigError("grid too coarse: no interior node");

  const double reach = 3.0 * std::sqrt(2.0) * h_ + 1e-12;
  for (int k : interior_) {
    if (dist_[k] > reach) continue;
    const int i = ix(k), j = iy(k);
    for (int dj = -3; dj <= 3; ++dj)
      for (int di = -3; di <= 3; ++di) {
        const int q = index(i + di, j + dj);
        if (kind_[q] == NodeKind::outside) {
          kind_[q] = NodeKind::ghost;
          ghosts_.push_back(q);
        }
      }
  }
  std::sort(ghosts_.begin(), ghosts_.end());

  for (int k : interior_) {
    const int i = ix(k), j = iy(k);
    const Vec2 p = point(k);
    for (int dir = 0; dir < 4; ++dir) {
      const int q = index(i + kDirX[dir], j + kDirY[dir]);
      if (interior(q)) continue;
      double theta;
      Vec2 bp = p;
      if (dir < 2) {
        const double yy = p.y() / spec_.b;
        const double xb = spec_.a * std::sqrt(std::max(0.0, 1.0 - yy * yy));
        const double target = dir == 0 ? xb : -xb;
        theta = std::abs(target - p.x()) / h_;
        bp.x() = target;
      } else {
        const double xx = p.x() / spec_.a;
        const double yb = spec_.b * std::sqrt(std::max(0.0, 1.0 - xx * xx));
        const double target = dir == 2 ? yb : -yb;
        theta = std::abs(target - p.y()) / h_;
        bp.y() = target;
      }
      theta = std::clamp(theta, 1e-6, 1.0);
      if (first_cut_[k] < 0) first_cut_[k] = static_cast<int>(cuts_.size());
      cuts_.push_back({k, dir, theta, bp});
    }
  }

  const double full = h_ * h_;
  const double half_diag = 0.5 * std::sqrt(2.0) * h_ * (1.0 + 1e-9);
  std::vector<int> partial_outside;
  for (int k = 0; k < n; ++k) {
    if (dist_[k] >= half_diag) {
      weight_[k] = full;
      continue;
    }
    if (dist_[k] <= -half_diag) continue;
    const Vec2 p = point(k);
    weight_[k] = clipped_area(spec_, p.x() - 0.5 * h_, p.x() + 0.5 * h_, p.y() - 0.5 * h_, p.y() + 0.5 * h_);
    if (!interior(k) && weight_[k] > 0.0) partial_outside.push_back(k);
  }
  for (int k : partial_outside) {
    const int i = ix(k), j = iy(k);
    const Vec2 p = point(k);
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int r = 2; r <= 3 && best < 0; ++r)
      for (int dj = -r; dj <= r; ++dj)
        for (int di = -r; di <= r; ++di) {
          if (!in_box(i + di, j + dj)) continue;
          const int q = index(i + di, j + dj);
          if (!interior(q)) continue;
          const double dd = (point(q) - p).squaredNorm();
          if (dd < bd) {
            bd = dd;
            best = q;
          }
        }
    if (best >= 0) weight_[best] += weight_[k];
    weight_[k] = 0.0;
  }
}

int Grid::cut_of(int k, int dir) const {
  int c = first_cut_[k];
  if (c < 0) return -1;
  for (; c < static_cast<int>(cuts_.size()) && cuts_[c].node == k; ++c)
    if (cuts_[c].dir == dir) return c;
  return -1;
}

double Grid::weight_sum() const {
  double s = 0.0;
  for (int k : interior_) s += weight_[k];
  return s;
}

GridPtr build_grid(const DomainSpec& spec, int resolution) {
  return std::make_shared<const Grid>(spec, resolution);
}

}  // namespace glvortex
