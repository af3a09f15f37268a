#ifndef TEMPORA_GRID_HPP
#define TEMPORA_GRID_HPP

#include <cstdint>
#include <cstdlib>

namespace tempora {

/// Product chart: uniform time levels on [t_lo, t_hi] times a spatial slice
/// that is either an interval [x_lo, x_lo + x_extent] or a circle of
/// circumference x_extent (periodic).
struct Chart {
  double t_lo = -1.0;
  double t_hi = 1.0;
  double x_lo = -1.0;
  double x_extent = 2.0;
  int nt = 3;
  int nx = 3;
  bool periodic = false;

  double ht() const { return (t_hi - t_lo) / (nt - 1); }
  double hx() const { return periodic ? x_extent / nx : x_extent / (nx - 1); }

  double t_coord(int it) const { return t_lo + it * ht(); }
  double x_coord(int ix) const { return x_lo + ix * hx(); }

  std::size_t grid_count() const { return static_cast<std::size_t>(nt) * nx; }
  std::size_t gid(int it, int ix) const { return static_cast<std::size_t>(it) * nx + ix; }
  int gid_it(std::size_t g) const { return static_cast<int>(g / nx); }
  int gid_ix(std::size_t g) const { return static_cast<int>(g % nx); }

  /// Wrapped column index; -1 when out of range on an interval slice.
  int wrap_ix(int ix) const {
    if (periodic) {
      int m = ix % nx;
      return m < 0 ? m + nx : m;
    }
    return (ix < 0 || ix >= nx) ? -1 : ix;
  }

  /// Signed column difference, minimal across the wrap on a circle.
  int col_delta(int ix_from, int ix_to) const {
    int d = ix_to - ix_from;
    if (periodic) {
      d %= nx;
      if (d > nx / 2) d -= nx;
      if (d < -(nx / 2)) d += nx;
    }
    return d;
  }
};

} // namespace tempora

#endif
