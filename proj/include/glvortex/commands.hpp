#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glvortex/geometry.hpp"
#include "glvortex/renorm.hpp"

namespace glvortex {

constexpr const char* kVersion = "0.3.0";

struct RunManifest {
  std::string command;
  DomainSpec domain;
  std::vector<int> resolutions;
  std::vector<double> hex, lambda, eps;
  std::vector<int> N;
  std::uint64_t seed = 0;
  double t0 = 0.0;
  std::string started_at;
  double wall_clock_s = 0.0;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, std::string>> options;  // everything else, as given
};
std::string manifest_json(const RunManifest& m);

struct FieldsOptions {
  DomainSpec domain;
  int resolution = 128;
  int lattice_resolution = 16;
  std::vector<double> hex;
  std::filesystem::path out = "out";
};
RunManifest cmd_fields(const FieldsOptions& o);

struct ObstacleCmdOptions {
  DomainSpec domain;
  int resolution = 128;
  std::vector<double> lambda;  // with hex (for ξ_ε)
  double hex = 1e6;
  std::vector<std::pair<double, int>> hex_N;  // λ = hex/(2πN)
  bool pgs = false;
  int jobs = 1;
  std::filesystem::path out = "out";
};
RunManifest cmd_obstacle(const ObstacleCmdOptions& o);

struct MinimizeCmdOptions {
  DomainSpec domain;
  int resolution = 192;
  std::vector<double> hex;
  std::string n_rule = "max";  // max | fixed:K | fraction:F
  std::uint64_t seed = 1;
  int starts = 8;
  double t0 = 0.01;
  int max_iters = 2000;
  int jobs = 1;
  std::filesystem::path out = "out";
};
RunManifest cmd_minimize(const MinimizeCmdOptions& o);
// N for one hex under the rule.
int n_from_rule(const std::string& rule, const DomainSpec& spec, double hex);

struct IdentitiesOptions {
  DomainSpec domain;
  std::vector<int> resolutions{64, 128};
  int count = 10;          // random configurations
  int max_N = 4;
  double rho_min = 0.1;
  std::uint64_t seed = 1;
  std::filesystem::path config_file;  // replaces the random set when given
  double hex = 10.0;
  int jobs = 1;
  std::filesystem::path out = "out";
};
RunManifest cmd_identities(const IdentitiesOptions& o);

struct GammaCmdOptions {
  DomainSpec domain;
  std::vector<double> eps{0.01, 0.005};
  int count = 5;
  int N = 3;
  double rho_min = 0.1;
  std::uint64_t seed = 1;
  double cells_per_eps = 6.0;
  int w_resolution = 128;
  bool product_phase = false;
  int jobs = 1;
  std::filesystem::path out = "out";
};
RunManifest cmd_gamma(const GammaCmdOptions& o);

// Uniform points with ρ_a >= rho_min, N drawn from 1..max_N (exactly max_N when fixed_N).
std::vector<VortexConfig> random_configs(const DomainSpec& spec, int count, int max_N, double rho_min,
                                         std::uint64_t seed, bool fixed_N = false);

}  // namespace glvortex
