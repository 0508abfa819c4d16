#pragma once

#include <functional>
#include <vector>

#include "glvortex/geometry.hpp"

namespace glvortex {

using PointFn = std::function<double(const Vec2&)>;

// Real field sampled on the grid. Values are stored for every node of the
// box; interior nodes carry the field, ghost nodes carry an extension used by
// difference stencils and interpolation, outside nodes are zero.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double fill = 0.0);

  // Exact samples of f at interior and ghost nodes.
  static ScalarField sample(GridPtr grid, const PointFn& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  bool empty() const { return !grid_; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }
  double& operator[](int k) { return v_[k]; }
  double operator[](int k) const { return v_[k]; }

  void require_same_grid(const ScalarField& o) const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double c);
  ScalarField& operator+=(double c);

  double max_interior() const;
  double min_interior() const;
  double max_abs_interior() const;
  bool finite() const;

 private:
  GridPtr grid_;
  std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);

struct VectorField {
  ScalarField x, y;
};

// Boundary data sampled at the cut points of the grid, one value per cut.
std::vector<double> boundary_values(const Grid& grid, const PointFn& g);

// Extends interior values into the ghost band. With boundary data the first
// ghost layer uses a quadratic through the boundary value; further layers
// are polynomial extrapolation along grid axes.
void fill_ghosts(ScalarField& f, const std::vector<double>* bvals = nullptr);

// Fills valued nodes whose flag in known is 0 by axis extrapolation from
// known nodes; flags are updated.
void extrapolate(ScalarField& f, std::vector<unsigned char>& known);

// Centered differences at interior and ghost nodes.
VectorField gradient_field(const ScalarField& f);
double integrate(const ScalarField& f);
// Cubic convolution interpolation; throws DomainError outside the domain.
double interpolate(const ScalarField& f, const Vec2& p);
Vec2 interpolate_gradient(const ScalarField& f, const Vec2& p);

}  // namespace glvortex
