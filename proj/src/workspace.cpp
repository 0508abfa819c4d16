#include "glvortex/workspace.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "glvortex/renorm.hpp"

namespace glvortex {

namespace fs = std::filesystem;
using Lock = std::lock_guard<std::recursive_mutex>;

Workspace::Workspace(const DomainSpec& spec, int resolution, int lattice_resolution)
    : grid_(build_grid(spec, resolution)), lattice_resolution_(lattice_resolution) {}

const OperatorHandle& Workspace::helmholtz() const {
  Lock lock(mu_);
  if (!helm_) helm_ = std::make_unique<OperatorHandle>(grid_, OperatorKind::helmholtz);
  return *helm_;
}

const OperatorHandle& Workspace::laplace() const {
  Lock lock(mu_);
  if (!lap_) lap_ = std::make_unique<OperatorHandle>(grid_, OperatorKind::laplace);
  return *lap_;
}

const ScalarField& Workspace::xi0() const {
  Lock lock(mu_);
  if (!xi0_) {
    xi0_ = std::make_unique<ScalarField>(glvortex::xi0(helmholtz()));
    F_xi0_ = F_energy(*xi0_);
  }
  return *xi0_;
}

double Workspace::F_xi0() const {
  Lock lock(mu_);
  xi0();
  return F_xi0_;
}

const DiagLattice& Workspace::lattice() const {
  Lock lock(mu_);
  if (!lattice_) {
    lattice_ = load_cached_lattice(*grid_, lattice_resolution_);
    if (!lattice_) {
      lattice_ = std::make_unique<DiagLattice>(helmholtz(), lattice_resolution_);
      store_cached_lattice(*grid_, *lattice_);
    }
  }
  return *lattice_;
}

const ScalarField& Workspace::v_eps(double hex) const {
  Lock lock(mu_);
  auto it = v_eps_.find(hex);
  if (it == v_eps_.end()) it = v_eps_.emplace(hex, glvortex::v_eps(lattice(), grid_, hex)).first;
  return it->second;
}

const ScalarField& Workspace::xi_eps(double hex) const {
  Lock lock(mu_);
  auto it = xi_eps_.find(hex);
  if (it == xi_eps_.end()) it = xi_eps_.emplace(hex, xi0() + v_eps(hex)).first;
  return it->second;
}

namespace {

fs::path cache_path(const Grid& grid, int lattice_resolution) {
  const char* dir = std::getenv("GLVORTEX_CACHE_DIR");
  if (!dir || !*dir) return {};
  std::ostringstream name;
  name.precision(17);
  name << "slattice_" << grid.spec().name() << "_" << grid.spec().a << "_" << grid.spec().b << "_r"
       << grid.resolution() << "_l" << lattice_resolution << ".json";
  return fs::path(dir) / name.str();
}

}  // namespace

std::unique_ptr<DiagLattice> load_cached_lattice(const Grid& grid, int lattice_resolution) {
  const fs::path p = cache_path(grid, lattice_resolution);
  if (p.empty() || !fs::exists(p)) return nullptr;
  try {
    std::ifstream in(p);
    const auto j = nlohmann::json::parse(in);
    std::vector<double> rem;
    for (const auto& v : j.at("remainder"))
      rem.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    return std::make_unique<DiagLattice>(grid.spec(), lattice_resolution, rem, j.at("min_distance").get<double>());
  } catch (const std::exception&) {
    return nullptr;
  }
}

void store_cached_lattice(const Grid& grid, const DiagLattice& lattice) {
  const fs::path p = cache_path(grid, lattice.lattice_resolution());
  if (p.empty()) return;
  nlohmann::json j;
  j["domain"] = grid.spec().name();
  j["semi_axes"] = {grid.spec().a, grid.spec().b};
  j["resolution"] = grid.resolution();
  j["lattice_resolution"] = lattice.lattice_resolution();
  j["min_distance"] = lattice.min_distance();
  auto& rem = j["remainder"] = nlohmann::json::array();
  for (double v : lattice.sampled()) {
    if (std::isfinite(v)) rem.push_back(v);
    else rem.push_back(nullptr);
  }
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << j.dump();
  }
  fs::rename(tmp, p, ec);
}

}  // namespace glvortex
