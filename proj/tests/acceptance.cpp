// Acceptance run: one PASS/FAIL line per criterion. Optional arguments select criteria by number.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <memory>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "glvortex/bessel.hpp"
#include "glvortex/commands.hpp"
#include "glvortex/coupling.hpp"
#include "glvortex/glfield.hpp"
#include "glvortex/minimize.hpp"
#include "glvortex/obstacle.hpp"

using namespace glvortex;
namespace bs = glvortex::bessel;
constexpr double kPi = std::numbers::pi;

namespace {

// pinned tolerances
constexpr double kXi0Tol = 1e-3, kFTol = 1e-2, kSTol = 5e-3, kGTol = 5e-4;
constexpr double kSlopeLo = 1.8, kSlopeHi = 2.2;
constexpr double kSepFloorFactor = 0.5;  // c0, c1 frozen as this fraction of the hex = 25 values
constexpr double kIdentityTol = 1e-2, kRatioMin = 3.0;
constexpr double kSpreadTol = 0.1, kDriftTol = 0.05;
constexpr double kInversionTol = 0.10;
constexpr double kLimit1 = 10, kLimit2 = 180, kLimit3 = 1200, kLimit4 = 300, kLimit5 = 60, kLimit6 = 300;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("CRITERION %d %s: %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string f(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

void disk_oracles() {
  const auto t = Clock::now();
  Workspace ws(DomainSpec::disk(), 128);
  const double xi = interpolate(ws.xi0(), Vec2::Zero()), xi_ex = 1.0 / bs::I0(1.0) - 1.0;
  const double F = ws.F_xi0(), F_ex = kPi * bs::I1(1.0) / bs::I0(1.0);
  const double s = s_point(ws.helmholtz(), Vec2::Zero()), s_ex = bs::kL - bs::K0(1.0) / bs::I0(1.0);
  const GreenBundle g = green_G(ws.helmholtz(), Vec2::Zero());
  const double G_ex = (bs::K0(0.5) - bs::K0(1.0) * bs::I0(0.5) / bs::I0(1.0)) / (2.0 * kPi);
  double G_err = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double th = 2.0 * kPi * i / 8.0;
    G_err = std::max(G_err, std::abs(green_value(g, {0.5 * std::cos(th), 0.5 * std::sin(th)}) - G_ex));
  }
  const double secs = since(t);
  const double e1 = std::abs(xi - xi_ex), e2 = std::abs(F - F_ex), e3 = std::abs(s - s_ex);
  report(1, e1 <= kXi0Tol && e2 <= kFTol && e3 <= kSTol && G_err <= kGTol && secs < kLimit1,
         "disk oracles at resolution 128: |xi0(0) err| " + f("%.2e", e1) + ", |F err| " + f("%.2e", e2) +
             ", |s(0) err| " + f("%.2e", e3) + ", max |G(0.5) err| " + f("%.2e", G_err) + ", " + f("%.1f s", secs));
}

void quadratic_law() {
  const auto t = Clock::now();
  const double hex = 1e6;
  Workspace ws(DomainSpec::disk(), 256);
  std::vector<double> gaps;
  for (int k = 0; k < 8; ++k) gaps.push_back(0.05 * std::pow(8.0, k / 7.0));  // 0.05 .. 0.4
  std::vector<double> lx, ly;
  int violations = 0;
  bool collar = true;
  for (double gap : gaps) {
    const double lambda = 1.0 / (kPi - gap);
    const ObstacleSolution sol = solve_m(ws, hex, lambda);
    const BarrierReport b = check_barriers(sol);
    violations += b.inner_violations + b.outer_violations;
    collar = collar && b.collar_ok;
    lx.push_back(std::log(gap));
    ly.push_back(std::log(sol.m));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / 8, my = std::accumulate(ly.begin(), ly.end(), 0.0) / 8;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 8; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx, secs = since(t);
  report(2, slope >= kSlopeLo && slope <= kSlopeHi && violations == 0 && secs < kLimit2,
         "m(lambda) vs |Omega|-1/lambda over 8 gaps in [0.05, 0.4] at resolution 256: slope " + f("%.4f", slope) +
             ", barrier sandwich violations " + std::to_string(violations) + (collar ? "" : " (collar exceeded)") +
             ", " + f("%.1f s", secs));
}

struct Sweep {
  std::unique_ptr<Workspace> ws;
  std::map<std::pair<double, int>, MinimizeReport> reports;
  const MinimizeReport& get(double hex, int N) {
    auto it = reports.find({hex, N});
    if (it != reports.end()) return it->second;
    MinimizeOptions o;
    o.starts = 4;
    o.seed = 1;
    o.jobs = jobs();
    return reports.emplace(std::make_pair(hex, N), minimize_H(*ws, hex, N, o)).first->second;
  }
};

Sweep& sweep() {
  static Sweep s{std::make_unique<Workspace>(DomainSpec::disk(), 192), {}};
  return s;
}

const std::vector<double> kHexes{25.0, 50.0, 100.0, 200.0};

void separation_laws() {
  const auto t = Clock::now();
  Sweep& s = sweep();
  const DomainSpec& d = s.ws->spec();
  const MinimizeReport& base = s.get(25.0, ParamRegime::N_max(d, 25.0));
  const SeparationCheck b = check_separation(d, base, 25.0);
  const double c0 = kSepFloorFactor * b.c0_hat, c1 = kSepFloorFactor * b.c1_hat;
  bool pass = true;
  std::string detail = "frozen c0 " + f("%.3f", c0) + ", c1 " + f("%.3f", c1) + ";";
  for (double hex : kHexes) {
    const int N = ParamRegime::N_max(d, hex);
    const MinimizeReport& r = s.get(hex, N);
    const SeparationCheck c = check_separation(d, r, hex, c0, c1);
    pass = pass && r.converged && c.pass;
    detail += " hex " + f("%g", hex) + " N " + std::to_string(N) + ": c0_hat " + f("%.3f", c.c0_hat) + " c1_hat " +
              f("%.3f", c.c1_hat) + (r.converged ? "" : " (not converged)") + ";";
  }
  const double secs = since(t);
  report(3, pass && secs < kLimit3, detail + " resolution 192, " + f("%.1f s", secs));
}

void identities() {
  const auto t = Clock::now();
  const DomainSpec d = DomainSpec::disk();
  const auto configs = random_configs(d, 10, 4, 0.1, 1);
  Workspace w64(d, 64), w128(d, 128);
  double wh_max = 0.0, b1_max = 0.0, wh_ratio = 1e300, b1_ratio = 1e300;
  for (const auto& c : configs) {
    const double wh_c = check_WH_identity(w64, c, 10.0).scaled, wh_f = check_WH_identity(w128, c, 10.0).scaled;
    const double b1_c = check_B1_identity(w64, c), b1_f = check_B1_identity(w128, c);
    wh_max = std::max(wh_max, wh_f);
    b1_max = std::max(b1_max, b1_f);
    wh_ratio = std::min(wh_ratio, wh_c / wh_f);
    b1_ratio = std::min(b1_ratio, b1_c / b1_f);
  }
  const double secs = since(t);
  report(4,
         wh_max <= kIdentityTol && b1_max <= kIdentityTol && wh_ratio >= kRatioMin && b1_ratio >= kRatioMin &&
             secs < kLimit4,
         "10 random configs, N <= 4, rho >= 0.1: max WH residual " + f("%.2e", wh_max) + ", min ratio 64->128 " +
             f("%.2f", wh_ratio) + "; max B1 residual " + f("%.2e", b1_max) + ", min ratio " + f("%.2f", b1_ratio) +
             ", " + f("%.1f s", secs));
}

void splitting() {
  const auto t = Clock::now();
  std::vector<double> worst;
  for (int r : {64, 128}) {
    const GridPtr g = build_grid(DomainSpec::disk(), r);
    double w = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto pair = random_smooth_pair(g->spec(), seed);
      const ComplexField u = sample_complex(g, pair.u);
      const PotentialField B{ScalarField::sample(g, pair.B)};
      w = std::max(w, check_split_identity(u, B, 2.0, 0.3).scaled);
    }
    worst.push_back(w);
  }
  const double ratio = worst[0] / worst[1], secs = since(t);
  report(5, worst[1] <= kIdentityTol && ratio >= kRatioMin && secs < kLimit5,
         "splitting identity, worst of 5 random smooth pairs: " + f("%.2e", worst[0]) + " at 64, " +
             f("%.2e", worst[1]) + " at 128, ratio " + f("%.2f", ratio) + ", " + f("%.1f s", secs));
}

void gamma_consistency() {
  const auto t = Clock::now();
  const DomainSpec d = DomainSpec::disk();
  GammaOptions o;
  o.jobs = jobs();
  const GammaEstimate e = estimate_gamma(d, random_configs(d, 5, 3, 0.1, 1, true), {0.01, 0.005}, o);
  double spread01 = 0.0;
  {
    double lo = 1e300, hi = -1e300;
    for (const auto& s : e.table)
      if (s.eps == 0.01) {
        lo = std::min(lo, s.gamma);
        hi = std::max(hi, s.gamma);
      }
    spread01 = hi - lo;
  }
  const double secs = since(t);
  report(6, spread01 <= kSpreadTol && e.drift <= kDriftTol && secs < kLimit6,
         "5 random 3-point configs: gamma_hat " + f("%.4f", e.gamma_hat) + ", spread at eps 0.01 " +
             f("%.4f", spread01) + ", drift 0.01 -> 0.005 " + f("%.4f", e.drift) + ", " + f("%.1f s", secs));
}

void equilibrium_agreement() {
  const auto t = Clock::now();
  Sweep& s = sweep();
  const double hex = 200.0;
  const int nmax = ParamRegime::N_max(s.ws->spec(), hex);
  std::vector<double> disc;
  std::string detail;
  for (int N : {nmax / 4, nmax / 2, nmax}) {
    const MinimizeReport& r = s.get(hex, N);
    const ObstacleSolution mu = equilibrium_measure(*s.ws, hex, N);
    disc.push_back(empirical_vs_equilibrium(*s.ws, r, hex, &mu).value);
    detail += " N " + std::to_string(N) + ": " + f("%.3e", disc.back()) + ";";
  }
  int inversions = 0;
  bool small = true;
  for (std::size_t i = 0; i + 1 < disc.size(); ++i)
    if (disc[i + 1] > disc[i]) {
      ++inversions;
      small = small && disc[i + 1] <= (1.0 + kInversionTol) * disc[i];
    }
  report(7, inversions == 0 || (inversions == 1 && small),
         "test-function discrepancy at hex 200:" + detail + " inversions " + std::to_string(inversions) + ", " +
             f("%.1f s", since(t)));
}

void screened_inequality() {
  const auto t = Clock::now();
  Sweep& s = sweep();
  int checked = 0, gap_fail = 0, U_fail = 0;
  double worst = -1e300;
  for (double hex : kHexes) {
    const int N = ParamRegime::N_max(s.ws->spec(), hex);
    const MinimizeReport& r = s.get(hex, N);
    if (!r.converged) continue;
    const ObstacleSolution mu = equilibrium_measure(*s.ws, hex, N);
    for (const ScreenedPotential& p : screened_potentials(*s.ws, r, hex, mu)) {
      ++checked;
      worst = std::max(worst, (p.gap - p.bound - p.slack));
      if (p.gap > p.bound + p.slack) ++gap_fail;
      if (!(p.inf_U < 0.0)) ++U_fail;
    }
  }
  report(8, checked > 0 && gap_fail == 0 && U_fail == 0,
         std::to_string(checked) + " points over the criterion-3 minimizers: gap violations " +
             std::to_string(gap_fail) + ", inf U >= 0 at " + std::to_string(U_fail) + ", max(gap - bound - slack) " +
             f("%.3e", worst) + ", " + f("%.1f s", since(t)));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::function<void()>> criteria{disk_oracles, quadratic_law,     separation_laws,
                                                    identities,   splitting,         gamma_consistency,
                                                    equilibrium_agreement, screened_inequality};
  for (int i = 0; i < static_cast<int>(criteria.size()); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(i + 1, false, std::string("error: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
