#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace glvortex {

using Vec2 = Eigen::Vector2d;

enum class DomainKind { disk, ellipse };

struct DomainSpec {
  DomainKind kind = DomainKind::disk;
  double a = 1.0;  // semi-axis along x
  double b = 1.0;  // semi-axis along y

  static DomainSpec disk(double radius = 1.0);
  static DomainSpec ellipse(double a, double b);

  double area() const;
  double diameter() const;
  // Radius of the collar on which the distance function is smooth.
  double d0() const;
  // Closed-domain level function (x/a)^2 + (y/b)^2; < 1 inside.
  double level(const Vec2& p) const;
  bool contains(const Vec2& p) const { return level(p) < 1.0; }
  std::string name() const;
  void validate() const;
};

struct DistanceInfo {
  double d;       // signed distance, positive inside
  Vec2 gradient;  // unit gradient of d
  Vec2 nearest;   // nearest boundary point
};

double signed_distance(const DomainSpec& spec, const Vec2& p);
DistanceInfo distance_info(const DomainSpec& spec, const Vec2& p);

enum class NodeKind : std::uint8_t { outside = 0, interior = 1, ghost = 2 };

// Axis directions used by cut records: +x, -x, +y, -y.
inline constexpr std::array<int, 4> kDirX{1, -1, 0, 0};
inline constexpr std::array<int, 4> kDirY{0, 0, 1, -1};

struct Cut {
  int node;      // flat index of the interior node
  int dir;       // 0..3, see kDirX/kDirY
  double theta;  // fractional distance to the boundary along dir, in (0, 1]
  Vec2 point;    // boundary crossing
};

// Uniform Cartesian grid over the bounding box of the domain. Nodes sit at
// integer multiples of h = 1/resolution, so coarse grids nest in fine ones.
class Grid {
 public:
  Grid(const DomainSpec& spec, int resolution);

  const DomainSpec& spec() const { return spec_; }
  int resolution() const { return resolution_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int node_count() const { return nx_ * ny_; }
  int interior_count() const { return static_cast<int>(interior_.size()); }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  Vec2 bbox_min() const { return {x0_, y0_}; }
  Vec2 bbox_max() const { return {x0_ + (nx_ - 1) * h_, y0_ + (ny_ - 1) * h_}; }

  int index(int i, int j) const { return j * nx_ + i; }
  int ix(int k) const { return k % nx_; }
  int iy(int k) const { return k / nx_; }
  Vec2 point(int k) const { return {x0_ + ix(k) * h_, y0_ + iy(k) * h_}; }
  Vec2 point(int i, int j) const { return {x0_ + i * h_, y0_ + j * h_}; }
  bool in_box(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }

  NodeKind kind(int k) const { return kind_[k]; }
  bool interior(int k) const { return kind_[k] == NodeKind::interior; }
  // Interior or ghost: the node carries a meaningful field value.
  bool valued(int k) const { return kind_[k] != NodeKind::outside; }
  // Unknown number of an interior node, -1 elsewhere.
  int unknown(int k) const { return unknown_[k]; }
  const std::vector<int>& interior_nodes() const { return interior_; }
  const std::vector<int>& ghost_nodes() const { return ghosts_; }
  const std::vector<Cut>& cuts() const { return cuts_; }
  // Cut index for (node, dir) or -1.
  int cut_of(int k, int dir) const;
  bool near_boundary(int k) const { return first_cut_[k] >= 0; }

  double distance(int k) const { return dist_[k]; }
  const std::vector<double>& distances() const { return dist_; }
  // Quadrature weight of the node (exact cell area of the domain, with the
  // slivers of outside cells moved to a nearby interior node).
  double weight(int k) const { return weight_[k]; }
  const std::vector<double>& weights() const { return weight_; }
  double weight_sum() const;

 private:
  DomainSpec spec_;
  int resolution_;
  double h_;
  int nx_, ny_;
  double x0_, y0_;
  std::vector<NodeKind> kind_;
  std::vector<int> unknown_;
  std::vector<int> interior_;
  std::vector<int> ghosts_;
  std::vector<Cut> cuts_;
  std::vector<int> first_cut_;  // first cut index per node, -1 if none
  std::vector<double> dist_;
  std::vector<double> weight_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(const DomainSpec& spec, int resolution);

// Area of the domain inside the axis-aligned rectangle [x0,x1]x[y0,y1].
double clipped_area(const DomainSpec& spec, double x0, double x1, double y0, double y1);

}  // namespace glvortex
