#ifndef TEMPORA_SPACETIME_HPP
#define TEMPORA_SPACETIME_HPP

#include <array>
#include <string>
#include <vector>

#include "tempora/grid.hpp"
#include "tempora/lorlin.hpp"

namespace tempora {

enum class ModelFamily { Minkowski2d, DiamondMinkowski, CylinderProduct, ConformalWarp, CarvedMinkowski };

const char* to_string(ModelFamily f);

/// Conformal factor profile over the spatial coordinate.
struct WarpSpec {
  enum class Kind { Constant, Sinusoidal, GaussianBump };
  Kind kind = Kind::Constant;
  double base = 1.0;      // constant part
  double amplitude = 0.0; // sinusoidal / bump amplitude
  int mode = 1;           // sinusoidal: wavenumber around the circle
  double center = 0.0;    // bump center
  double width = 0.5;     // bump width

  double omega(double x, double x_extent) const;
};

struct ModelSpec {
  ModelFamily family = ModelFamily::Minkowski2d;
  double t_lo = -1.0, t_hi = 1.0;
  int nt = 3;
  // Interval families use [x_lo, x_hi]; circle families use circumference.
  double x_lo = -1.0, x_hi = 1.0;
  double circumference = 2.0;
  int nx = 3;
  double diamond_half_width = 1.0;
  WarpSpec warp;

  bool circle_topology() const {
    return family == ModelFamily::CylinderProduct || family == ModelFamily::ConformalWarp;
  }
};

/// Grid of events with a metric, future orientation vector and volume weight
/// per node. Excluded grid positions (carved regions) carry no node.
/// Immutable after construction; shareable across worker threads.
class SampledSpacetime {
public:
  const Chart& chart() const { return chart_; }
  ModelFamily family() const { return family_; }
  bool has_exclusions() const { return excluded_count_ > 0; }
  std::size_t excluded_count() const { return excluded_count_; }

  std::size_t node_count() const { return grid_of_node_.size(); }
  bool grid_included(std::size_t gid) const { return node_of_grid_[gid] >= 0; }
  std::int32_t node_of_grid(std::size_t gid) const { return node_of_grid_[gid]; }
  std::size_t grid_of_node(std::size_t n) const { return grid_of_node_[n]; }

  int node_it(std::size_t n) const { return chart_.gid_it(grid_of_node_[n]); }
  int node_ix(std::size_t n) const { return chart_.gid_ix(grid_of_node_[n]); }
  double node_t(std::size_t n) const { return chart_.t_coord(node_it(n)); }
  double node_x(std::size_t n) const { return chart_.x_coord(node_ix(n)); }

  /// Node id at (it, ix) with column wrap, or -1 when absent.
  std::int32_t node_at(int it, int ix) const {
    if (it < 0 || it >= chart_.nt) return -1;
    const int w = chart_.wrap_ix(ix);
    if (w < 0) return -1;
    return node_of_grid_[chart_.gid(it, w)];
  }

  const Sym2& metric(std::size_t n) const { return metric_[n]; }
  const std::array<double, 2>& orientation(std::size_t n) const { return orientation_[n]; }
  double volume_density(std::size_t n) const { return volume_density_[n]; }
  const std::vector<double>& volume_densities() const { return volume_density_; }

  /// First included row index at or above `it` in column ix; -1 when none.
  std::int32_t lowest_node_in_column(int ix) const { return column_lo_[ix]; }
  std::int32_t highest_node_in_column(int ix) const { return column_hi_[ix]; }

  friend SampledSpacetime build_model(const ModelSpec& spec);

private:
  Chart chart_;
  ModelFamily family_ = ModelFamily::Minkowski2d;
  std::vector<Sym2> metric_;
  std::vector<std::array<double, 2>> orientation_;
  std::vector<double> volume_density_;
  std::vector<std::int32_t> node_of_grid_;
  std::vector<std::size_t> grid_of_node_;
  std::vector<std::int32_t> column_lo_, column_hi_; // node ids, -1 when column empty
  std::size_t excluded_count_ = 0;
};

/// Build a sampled model spacetime. Throws ConstructionError naming the node
/// if any included node fails the signature check.
SampledSpacetime build_model(const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Cauchy-surface candidates: graphs t = u(x) over the spatial slice,
// piecewise linear between columns.
// ---------------------------------------------------------------------------
struct SurfaceGraph {
  std::vector<double> u; // one value per spatial column

  double value(int ix) const { return u[ix]; }
};

/// Margin that keeps admitted surfaces strictly inside the light cone slope.
inline constexpr double kSurfaceSlopeMargin = 0.05;

/// Validates that the graph of u is spacelike on the given spacetime:
/// every segment slope stays below (1 - margin) times the local cone slope.
/// Throws InputError naming the first violating column.
SurfaceGraph make_surface(const SampledSpacetime& st, std::vector<double> u);

/// Constant-level surface u == t_level. Throws RangeError outside the chart
/// interior.
SurfaceGraph surface_between(const SampledSpacetime& st, double t_level);

// ---------------------------------------------------------------------------
// Finite symmetry groups acting by exact grid maps.
// ---------------------------------------------------------------------------
struct GroupElement {
  int shift = 0;    // columns, rotations on the circle
  bool flip = false; // x -> -x reflection
  std::string name;
  std::vector<std::int32_t> map; // node -> node
  std::vector<double> conf2;     // per-node pullback factor: phi*g = conf2 * g
};

struct GroupSpec {
  int rotation_order = 1;
  bool reflection = false;
};

/// Finite group of time-oriented conformal grid symmetries.
class GroupAction {
public:
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool is_isometric() const { return is_isometric_; }
  bool preserves_time_orientation() const { return preserves_time_orientation_; }
  /// Largest pullback residual ||phi*g - conf2 * g||_inf over elements/nodes.
  double pullback_residual() const { return pullback_residual_; }

  /// Test-support constructor: wraps raw elements without validation.
  static GroupAction unchecked(std::vector<GroupElement> elements, bool isometric, bool preserves_orientation);

  friend GroupAction build_group(const SampledSpacetime& st, const GroupSpec& spec);

private:
  std::vector<GroupElement> elements_;
  bool is_isometric_ = true;
  bool preserves_time_orientation_ = true;
  double pullback_residual_ = 0.0;
};

/// Build the group generated by a circle rotation of the given order and an
/// optional reflection. Rotations must map the grid to itself exactly: the
/// column count has to be divisible by the rotation order.
GroupAction build_group(const SampledSpacetime& st, const GroupSpec& spec);

} // namespace tempora

#endif
