#include "glvortex/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <json.hpp>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "glvortex/coupling.hpp"
#include "glvortex/errors.hpp"
#include "glvortex/glfield.hpp"
#include "glvortex/io.hpp"
#include "glvortex/minimize.hpp"
#include "glvortex/obstacle.hpp"

namespace glvortex {

namespace {

constexpr double kPi = std::numbers::pi;
using io::fmt;
using Clock = std::chrono::steady_clock;

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Runs fn(i) for i < n on up to jobs threads; the first exception wins.
template <class Fn>
void parallel_for(int n, int jobs, Fn fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

class Run {
 public:
  Run(const std::string& command, const DomainSpec& spec, const std::filesystem::path& out) : out_(out) {
    spec.validate();
    m_.command = command;
    m_.domain = spec;
    m_.started_at = utc_now();
  }
  RunManifest& manifest() { return m_; }
  std::filesystem::path file(const std::string& name) {
    std::filesystem::create_directories(out_);
    m_.outputs.push_back(name);
    return out_ / name;
  }
  RunManifest finish() {
    m_.wall_clock_s = std::chrono::duration<double>(Clock::now() - t0_).count();
    m_.outputs.push_back("manifest.json");
    io::atomic_write(out_ / "manifest.json", manifest_json(m_));
    return m_;
  }

 private:
  std::filesystem::path out_;
  RunManifest m_;
  Clock::time_point t0_ = Clock::now();
};

}  // namespace

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "glvortex";
  j["version"] = kVersion;
  j["command"] = m.command;
  j["domain"] = {{"kind", m.domain.kind == DomainKind::disk ? "disk" : "ellipse"},
                 {"a", m.domain.a},
                 {"b", m.domain.b},
                 {"text", io::domain_text(m.domain)}};
  j["resolutions"] = m.resolutions;
  j["hex"] = m.hex;
  j["lambda"] = m.lambda;
  j["eps"] = m.eps;
  j["N"] = m.N;
  j["seed"] = m.seed;
  j["t0"] = m.t0;
  nlohmann::ordered_json opts = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.options) opts[k] = v;
  j["options"] = opts;
  j["started_at"] = m.started_at;
  j["wall_clock_s"] = m.wall_clock_s;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

std::vector<VortexConfig> random_configs(const DomainSpec& spec, int count, int max_N, double rho_min,
                                         std::uint64_t seed, bool fixed_N) {
  if (count < 0 || max_N < 1) throw ConfigError("need count >= 0 and N >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-spec.a, spec.a), uy(-spec.b, spec.b);
  std::uniform_int_distribution<int> un(1, max_N);
  std::vector<VortexConfig> out;
  for (int c = 0; c < count; ++c) {
    const int N = fixed_N ? max_N : un(rng);
    for (int tries = 0;; ++tries) {
      if (tries > 200000) throw ConfigError("cannot place " + std::to_string(N) + " points with rho_a >= " + fmt(rho_min));
      VortexConfig cfg;
      while (cfg.N() < N) {
        const Vec2 p(ux(rng), uy(rng));
        if (spec.contains(p)) cfg.points.push_back(p);
      }
      if (rho(spec, cfg) >= rho_min) {
        out.push_back(std::move(cfg));
        break;
      }
    }
  }
  return out;
}

RunManifest cmd_fields(const FieldsOptions& o) {
  Run run("fields", o.domain, o.out);
  run.manifest().resolutions = {o.resolution};
  run.manifest().hex = o.hex;
  run.manifest().options = {{"lattice_resolution", std::to_string(o.lattice_resolution)}};
  Workspace ws(o.domain, o.resolution, o.lattice_resolution);
  const ScalarField sd = s_diag(ws.lattice(), ws.grid());
  std::vector<std::string> names{"xi0", "s_diag"};
  std::vector<const ScalarField*> fields{&ws.xi0(), &sd};
  for (double hex : o.hex) {
    names.push_back("v_eps_" + fmt(hex));
    fields.push_back(&ws.v_eps(hex));
  }
  io::write_fields(run.file("fields.csv"), names, fields);

  io::CsvTable summary({"quantity", "value"});
  summary.add({"F_xi0", fmt(ws.F_xi0())});
  summary.add({"xi0_center", fmt(interpolate(ws.xi0(), Vec2::Zero()))});
  summary.add({"s_center", fmt(ws.lattice().s(Vec2::Zero()))});
  summary.add({"lattice_samples", fmt(ws.lattice().samples())});
  for (double hex : o.hex) summary.add({"v_eps_residual_" + fmt(hex), fmt(v_eps_residual(ws, hex))});
  summary.write(run.file("summary.csv"));

  io::Svg svg(o.domain);
  svg.heatmap(ws.xi0(), ws.xi0().min_interior(), -ws.xi0().min_interior());
  svg.outline();
  svg.title("xi0, F = " + fmt(ws.F_xi0()));
  svg.write(run.file("xi0.svg"));
  return run.finish();
}

RunManifest cmd_obstacle(const ObstacleCmdOptions& o) {
  Run run("obstacle", o.domain, o.out);
  struct Point {
    double lambda, hex;
  };
  std::vector<Point> pts;
  for (double l : o.lambda) pts.push_back({l, o.hex});
  for (const auto& [hex, N] : o.hex_N) {
    if (N < 1) throw ConfigError("N must be positive");
    pts.push_back({hex / (2.0 * kPi * N), hex});
  }
  if (pts.empty()) throw ConfigError("give --lambda values or --hex-N pairs");
  for (const Point& p : pts) {
    const double floor = lambda_floor(o.domain, p.hex);
    if (!(p.lambda > floor)) {
      std::ostringstream os;
      os << "lambda = " << fmt(p.lambda) << " violates lambda > (|Omega| - hex^(-1/4))^(-1) = " << fmt(floor)
         << " at hex = " << fmt(p.hex) << "; f(lambda, 0) > 1 is required for m(lambda)";
      throw PreconditionError(os.str());
    }
    run.manifest().lambda.push_back(p.lambda);
    run.manifest().hex.push_back(p.hex);
  }
  run.manifest().resolutions = {o.resolution};
  run.manifest().options = {{"solver", o.pgs ? "pgs" : "active_set"}};

  Workspace ws(o.domain, o.resolution);
  ObstacleOptions opt;
  if (o.pgs) opt.method = ObstacleMethod::pgs;
  std::vector<ObstacleSolution> sols(pts.size());
  parallel_for(static_cast<int>(pts.size()), o.jobs,
               [&](int i) { sols[i] = solve_m(ws, pts[i].hex, pts[i].lambda, opt); });

  io::CsvTable t({"lambda", "hex", "m_lambda", "f_residual", "min_zeta", "coincidence_area", "dist_sigma_boundary",
                  "iters", "inner_violations", "outer_violations", "c4"});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& s = sols[i];
    const BarrierReport b = check_barriers(s);
    t.add({fmt(s.lambda), fmt(pts[i].hex), fmt(s.m), fmt(s.f - 1.0), fmt(s.zeta.min_interior()),
           fmt(coincidence_area(s)), fmt(dist_sigma_boundary(s)), fmt(s.iterations), fmt(b.inner_violations),
           fmt(b.outer_violations), fmt(b.c4)});
    io::Svg svg(o.domain);
    svg.mask(s.phi, s.coincidence, "#4a7fb5");
    svg.outline();
    svg.title("lambda = " + fmt(s.lambda) + ", m = " + fmt(s.m));
    svg.write(run.file("coincidence_" + std::to_string(i) + ".svg"));
  }
  t.write(run.file("obstacle.csv"));
  return run.finish();
}

int n_from_rule(const std::string& rule, const DomainSpec& spec, double hex) {
  const int nmax = ParamRegime::N_max(spec, hex);
  if (rule == "max") return nmax;
  const auto colon = rule.find(':');
  const std::string kind = rule.substr(0, colon), arg = colon == std::string::npos ? "" : rule.substr(colon + 1);
  try {
    if (kind == "fixed") return std::stoi(arg);
    if (kind == "fraction") return std::max(1, static_cast<int>(std::floor(std::stod(arg) * nmax)));
  } catch (const std::logic_error&) {
  }
  throw ConfigError("N rule must be max, fixed:K or fraction:F, got '" + rule + "'");
}

RunManifest cmd_minimize(const MinimizeCmdOptions& o) {
  Run run("minimize", o.domain, o.out);
  auto& m = run.manifest();
  m.resolutions = {o.resolution};
  m.hex = o.hex;
  m.seed = o.seed;
  m.t0 = o.t0;
  m.options = {{"n_rule", o.n_rule}, {"starts", std::to_string(o.starts)}, {"max_iters", std::to_string(o.max_iters)}};
  if (o.hex.empty()) throw ConfigError("give at least one --hex value");
  for (double hex : o.hex) {
    const int N = n_from_rule(o.n_rule, o.domain, hex);
    if (N < 1 || N > ParamRegime::N_bound(o.domain, hex))
      throw PreconditionError("N = " + std::to_string(N) + " at hex = " + fmt(hex) +
                              " violates 1 <= N <= h_ex/2π (|Ω|−h_ex^{−1/4}) = " +
                              fmt(ParamRegime::N_bound(o.domain, hex)));
    m.N.push_back(N);
  }

  Workspace ws(o.domain, o.resolution);
  MinimizeOptions mo;
  mo.starts = o.starts;
  mo.seed = o.seed;
  mo.t0 = o.t0;
  mo.max_iters = o.max_iters;
  mo.jobs = o.jobs;
  io::CsvTable t({"hex", "N", "energy", "min_boundary_dist", "min_separation", "c0_hat", "c1_hat", "discrepancy",
                  "runtime_s"});
  for (std::size_t i = 0; i < o.hex.size(); ++i) {
    const double hex = o.hex[i];
    const int N = m.N[i];
    const MinimizeReport rep = minimize_H(ws, hex, N, mo);
    const SeparationCheck sep = check_separation(o.domain, rep, hex);
    double disc = std::numeric_limits<double>::quiet_NaN();
    std::unique_ptr<ObstacleSolution> mu;
    try {
      mu = std::make_unique<ObstacleSolution>(equilibrium_measure(ws, hex, N));
      disc = empirical_vs_equilibrium(ws, rep, hex, mu.get()).value;
    } catch (const PreconditionError&) {
    }
    t.add({fmt(hex), fmt(N), fmt(rep.energy), fmt(rep.min_boundary_dist), fmt(rep.min_separation), fmt(sep.c0_hat),
           fmt(sep.c1_hat), fmt(disc), fmt(rep.runtime_s)});
    io::write_config(run.file("config_hex" + fmt(hex) + ".csv"), rep.best);
    io::Svg svg(o.domain);
    if (mu) svg.mask(mu->phi, mu->coincidence, "#d9e6f2");
    svg.outline();
    svg.points(rep.best.points, "#b22222");
    svg.title("hex = " + fmt(hex) + ", N = " + std::to_string(N));
    svg.write(run.file("minimizer_hex" + fmt(hex) + ".svg"));
  }
  t.write(run.file("minimize.csv"));
  return run.finish();
}

RunManifest cmd_identities(const IdentitiesOptions& o) {
  Run run("identities", o.domain, o.out);
  auto& m = run.manifest();
  m.resolutions = o.resolutions;
  m.hex = {o.hex};
  m.seed = o.seed;
  if (o.resolutions.empty()) throw ConfigError("give at least one resolution");
  std::vector<VortexConfig> configs;
  if (!o.config_file.empty()) {
    configs.push_back(io::read_config(o.config_file));
    m.options.push_back({"config_file", o.config_file.string()});
  } else {
    configs = random_configs(o.domain, o.count, o.max_N, o.rho_min, o.seed);
    m.options.push_back({"count", std::to_string(o.count)});
    m.options.push_back({"max_N", std::to_string(o.max_N)});
    m.options.push_back({"rho_min", fmt(o.rho_min)});
  }
  for (const auto& c : configs) m.N.push_back(c.N());

  std::vector<std::unique_ptr<Workspace>> wss;
  for (int r : o.resolutions) wss.push_back(std::make_unique<Workspace>(o.domain, r));
  for (std::size_t r = 0; r < wss.size(); ++r)
    for (const auto& c : configs)
      if (rho(o.domain, c) < 4.0 * wss[r]->h())
        throw PreconditionError("configuration " + io::config_hash(c) + " has rho_a < 4 h at resolution " +
                                std::to_string(o.resolutions[r]));

  const int nc = static_cast<int>(configs.size()), nr = static_cast<int>(wss.size());
  std::vector<double> b1(nc * nr), wh(nc * nr);
  parallel_for(nc * nr, o.jobs, [&](int idx) {
    const int c = idx / nr, r = idx % nr;
    b1[idx] = check_B1_identity(*wss[r], configs[c]);
    wh[idx] = check_WH_identity(*wss[r], configs[c], o.hex).scaled;
  });

  io::CsvTable t({"N", "hex", "config_hash", "residual_B1", "residual_WH", "resolution"});
  io::CsvTable rates({"config_hash", "from", "to", "rate_B1", "rate_WH"});
  for (int c = 0; c < nc; ++c) {
    const std::string hash = io::config_hash(configs[c]);
    for (int r = 0; r < nr; ++r)
      t.add({fmt(configs[c].N()), fmt(o.hex), hash, fmt(b1[c * nr + r]), fmt(wh[c * nr + r]), fmt(o.resolutions[r])});
    for (int r = 0; r + 1 < nr; ++r) {
      const double scale = std::log2(static_cast<double>(o.resolutions[r + 1]) / o.resolutions[r]);
      rates.add({hash, fmt(o.resolutions[r]), fmt(o.resolutions[r + 1]),
                 fmt(std::log2(b1[c * nr + r] / b1[c * nr + r + 1]) / scale),
                 fmt(std::log2(wh[c * nr + r] / wh[c * nr + r + 1]) / scale)});
    }
  }
  t.write(run.file("identities.csv"));
  if (rates.rows() > 0) rates.write(run.file("rates.csv"));
  return run.finish();
}

RunManifest cmd_gamma(const GammaCmdOptions& o) {
  Run run("gamma", o.domain, o.out);
  auto& m = run.manifest();
  m.eps = o.eps;
  m.seed = o.seed;
  m.options = {{"count", std::to_string(o.count)},
               {"cells_per_eps", fmt(o.cells_per_eps)},
               {"w_resolution", std::to_string(o.w_resolution)},
               {"phase", o.product_phase ? "product" : "canonical"}};
  const auto configs = random_configs(o.domain, o.count, o.N, o.rho_min, o.seed, true);
  for (const auto& c : configs) m.N.push_back(c.N());
  GammaOptions go;
  go.cells_per_eps = o.cells_per_eps;
  go.w_resolution = o.w_resolution;
  go.phase = o.product_phase ? PhaseKind::product : PhaseKind::canonical;
  go.jobs = o.jobs;
  const GammaEstimate est = estimate_gamma(o.domain, configs, o.eps, go);
  for (const auto& s : est.table)
    if (std::find(m.resolutions.begin(), m.resolutions.end(), s.resolution) == m.resolutions.end())
      m.resolutions.push_back(s.resolution);

  io::CsvTable t({"config_hash", "N", "eps", "resolution", "E", "W", "gamma_sample"});
  for (const auto& s : est.table)
    t.add({io::config_hash(configs[s.config]), fmt(s.N), fmt(s.eps), fmt(s.resolution), fmt(s.E), fmt(s.W),
           fmt(s.gamma)});
  t.write(run.file("gamma.csv"));
  io::CsvTable summary({"gamma_hat", "spread", "drift", "samples"});
  summary.add({fmt(est.gamma_hat), fmt(est.spread), fmt(est.drift), fmt(est.samples)});
  summary.write(run.file("gamma_summary.csv"));
  return run.finish();
}

}  // namespace glvortex
