// glvortex: experiment driver. One subcommand per study; every run writes CSV,
// SVG and a manifest.json into --out.
#include <CLI11.hpp>
#include <iostream>
#include <set>

#include "glvortex/commands.hpp"
#include "glvortex/errors.hpp"
#include "glvortex/io.hpp"

using namespace glvortex;

namespace {

std::vector<std::pair<double, int>> parse_pairs(const std::vector<std::string>& items) {
  std::vector<std::pair<double, int>> out;
  for (const auto& s : items) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("--hex-N expects hex:N, got '" + s + "'");
    try {
      out.emplace_back(std::stod(s.substr(0, colon)), std::stoi(s.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw ConfigError("--hex-N expects hex:N, got '" + s + "'");
    }
  }
  return out;
}

void common(CLI::App* sub, std::string& domain, std::string& out) {
  sub->add_option("--domain", domain, "disk | disk:R | ellipse:A,B")->capture_default_str();
  sub->add_option("--out", out, "output directory")->capture_default_str();
}

// Config entries become --key value arguments placed right after the subcommand,
// skipping keys already given on the command line.
std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty() || rest.empty()) return rest;
  CLI::App* sub = app.get_subcommand_no_throw(rest.front());
  if (sub == nullptr) throw ConfigError("--config needs a subcommand first");
  std::set<std::string> given;
  for (const auto& a : rest)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
  std::vector<std::string> extra;
  for (const auto& [key, value] : io::read_key_values(path)) {
    if (given.count(key)) continue;
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("unknown key '" + key + "' in " + path);
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") extra.push_back("--" + key);
      else if (value != "false" && value != "0") throw ConfigError("key '" + key + "' expects true or false");
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  rest.insert(rest.begin() + 1, extra.begin(), extra.end());
  return rest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glvortex: vortex minimizer studies on planar domains"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_option("--config", "key = value file; command-line flags win")->type_name("FILE");

  std::string domain = "disk";
  std::string out = "out";

  FieldsOptions fo;
  auto* fields = app.add_subcommand("fields", "xi0, F(xi0), s_diag and v_eps fields");
  common(fields, domain, out);
  fields->add_option("--resolution", fo.resolution)->capture_default_str();
  fields->add_option("--lattice-resolution", fo.lattice_resolution)->capture_default_str();
  fields->add_option("--hex", fo.hex, "hex values for v_eps")->delimiter(',');

  ObstacleCmdOptions oo;
  std::vector<std::string> hex_n;
  auto* obstacle = app.add_subcommand("obstacle", "m(lambda), coincidence sets and barrier checks");
  common(obstacle, domain, out);
  obstacle->add_option("--resolution", oo.resolution)->capture_default_str();
  obstacle->add_option("--lambda", oo.lambda)->delimiter(',');
  obstacle->add_option("--hex", oo.hex, "hex entering xi_eps for --lambda")->capture_default_str();
  obstacle->add_option("--hex-N", hex_n, "hex:N pairs, lambda = hex/(2 pi N)")->delimiter(',');
  obstacle->add_flag("--pgs", oo.pgs, "projected Gauss-Seidel instead of the active-set solver");
  obstacle->add_option("--jobs", oo.jobs)->capture_default_str();

  MinimizeCmdOptions mo;
  auto* minimize = app.add_subcommand("minimize", "minimize the renormalized energy over vortex positions");
  common(minimize, domain, out);
  minimize->add_option("--resolution", mo.resolution)->capture_default_str();
  minimize->add_option("--hex", mo.hex)->delimiter(',')->required();
  minimize->add_option("--n-rule", mo.n_rule, "max | fixed:K | fraction:F")->capture_default_str();
  minimize->add_option("--seed", mo.seed)->capture_default_str();
  minimize->add_option("--starts", mo.starts)->capture_default_str();
  minimize->add_option("--t0", mo.t0)->capture_default_str();
  minimize->add_option("--max-iters", mo.max_iters)->capture_default_str();
  minimize->add_option("--jobs", mo.jobs)->capture_default_str();

  IdentitiesOptions io_;
  std::string config_file;
  auto* identities = app.add_subcommand("identities", "B1 and W-H identity residuals with convergence rates");
  common(identities, domain, out);
  identities->add_option("--resolutions", io_.resolutions)->delimiter(',')->capture_default_str();
  identities->add_option("--count", io_.count)->capture_default_str();
  identities->add_option("--max-N", io_.max_N)->capture_default_str();
  identities->add_option("--rho-min", io_.rho_min)->capture_default_str();
  identities->add_option("--seed", io_.seed)->capture_default_str();
  identities->add_option("--configuration", config_file, "CSV with x,y columns instead of random configurations");
  identities->add_option("--hex", io_.hex)->capture_default_str();
  identities->add_option("--jobs", io_.jobs)->capture_default_str();

  GammaCmdOptions go;
  auto* gamma = app.add_subcommand("gamma", "core-energy constant from the Ginzburg-Landau energy surplus");
  common(gamma, domain, out);
  gamma->add_option("--eps", go.eps)->delimiter(',')->capture_default_str();
  gamma->add_option("--count", go.count)->capture_default_str();
  gamma->add_option("--N", go.N)->capture_default_str();
  gamma->add_option("--rho-min", go.rho_min)->capture_default_str();
  gamma->add_option("--seed", go.seed)->capture_default_str();
  gamma->add_option("--cells-per-eps", go.cells_per_eps)->capture_default_str();
  gamma->add_option("--w-resolution", go.w_resolution)->capture_default_str();
  gamma->add_flag("--product-phase", go.product_phase, "product of single-vortex phases");
  gamma->add_option("--jobs", go.jobs)->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "glvortex: " << e.what() << "\n";
    return 2;
  }

  try {
    const DomainSpec spec = io::parse_domain(domain);
    RunManifest m;
    if (*fields) {
      fo.domain = spec;
      fo.out = out;
      m = cmd_fields(fo);
    } else if (*obstacle) {
      oo.domain = spec;
      oo.out = out;
      oo.hex_N = parse_pairs(hex_n);
      m = cmd_obstacle(oo);
    } else if (*minimize) {
      mo.domain = spec;
      mo.out = out;
      m = cmd_minimize(mo);
    } else if (*identities) {
      io_.domain = spec;
      io_.out = out;
      io_.config_file = config_file;
      m = cmd_identities(io_);
    } else if (*gamma) {
      go.domain = spec;
      go.out = out;
      m = cmd_gamma(go);
    }
    for (const auto& f : m.outputs) std::cout << (std::filesystem::path(out) / f).string() << "\n";
    std::cout << m.command << " finished in " << io::fmt(m.wall_clock_s) << " s\n";
    return 0;
  } catch (const NumericError& e) {
    std::cerr << "glvortex: did not converge: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    std::cerr << "glvortex: precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "glvortex: bad configuration: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "glvortex: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "glvortex: " << e.what() << "\n";
    return 1;
  }
}
