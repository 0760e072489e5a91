#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>

#include <Eigen/Core>

namespace hitdns {

/// Number of conserved variables: rho, rho*u, rho*v, rho*w, e.
inline constexpr int kNumConserved = 5;

/// Ghost layers on every side. Covers the 5-point WENO stencil around an
/// interface and the 4th-order central difference.
inline constexpr int kGhostWidth = 3;

/// Uniform periodic grid with a halo of ghost points.
struct GridSpec {
  std::array<int, 3> n{};
  std::array<double, 3> length{};
  std::array<double, 3> spacing{};
  int ghost = kGhostWidth;

  /// Box with spacing = length / n. Throws ConfigError on nonpositive sizes or
  /// ghost < 3.
  static GridSpec periodic_box(std::array<int, 3> n,
                               std::array<double, 3> length = {2 * std::numbers::pi, 2 * std::numbers::pi,
                                                               2 * std::numbers::pi},
                               int ghost = kGhostWidth);

  static GridSpec cube(int n, double length = 2 * std::numbers::pi, int ghost = kGhostWidth) {
    return periodic_box({n, n, n}, {length, length, length}, ghost);
  }

  /// Sub-box of `local_n` points that keeps this grid's spacing bitwise.
  GridSpec subgrid(std::array<int, 3> local_n) const;

  int extent(int d) const { return n[d] + 2 * ghost; }
  std::array<std::ptrdiff_t, 3> strides() const {
    return {1, extent(0), std::ptrdiff_t{extent(0)} * extent(1)};
  }
  std::size_t total_points() const {
    return std::size_t(extent(0)) * std::size_t(extent(1)) * std::size_t(extent(2));
  }
  std::size_t interior_points() const { return std::size_t(n[0]) * std::size_t(n[1]) * std::size_t(n[2]); }
  double cell_volume() const { return spacing[0] * spacing[1] * spacing[2]; }
  bool is_cube() const { return n[0] == n[1] && n[1] == n[2]; }

  /// Unchecked lexicographic index (x fastest) of a point in [-g, n+g).
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k + ghost) * std::size_t(extent(1)) + std::size_t(j + ghost)) * std::size_t(extent(0)) +
           std::size_t(i + ghost);
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class Layout : std::uint64_t {
  Interleaved = 0,          ///< all variables of a point adjacent (AoS)
  ComponentContiguous = 1,  ///< each variable over all points adjacent (SoA)
};

const char* to_string(Layout layout);

/// Checked lexicographic index; throws BoundsError outside [-g, n+g).
std::size_t linear_index(int i, int j, int k, const GridSpec& spec);

/// Offset of variable `var` of point `point_index` inside a buffer holding
/// `total_points` points of `num_vars` variables.
std::size_t element_offset(std::size_t point_index, int var, Layout layout, std::size_t total_points,
                           int num_vars = kNumConserved);

/// Ghosted multi-variable field over a GridSpec. The five conserved
/// variables are the usual case; the viscous operator also stores
/// intermediate fields with other variable counts.
class FieldSet {
 public:
  FieldSet() = default;
  FieldSet(const GridSpec& spec, Layout layout, int num_vars = kNumConserved);

  const GridSpec& spec() const { return spec_; }
  Layout layout() const { return layout_; }
  int num_vars() const { return num_vars_; }

  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::size_t size() const { return std::size_t(values_.size()); }

  /// Distance between consecutive points of one variable.
  std::ptrdiff_t point_stride() const { return layout_ == Layout::Interleaved ? num_vars_ : 1; }
  /// Distance between consecutive variables of one point.
  std::ptrdiff_t var_stride() const {
    return layout_ == Layout::Interleaved ? 1 : std::ptrdiff_t(spec_.total_points());
  }
  std::ptrdiff_t offset(int var, std::size_t point) const {
    return var * var_stride() + std::ptrdiff_t(point) * point_stride();
  }

  double& operator()(int var, int i, int j, int k) { return values_[offset(var, spec_.index(i, j, k))]; }
  double operator()(int var, int i, int j, int k) const { return values_[offset(var, spec_.index(i, j, k))]; }

  /// Bounds-checked access.
  double& at(int var, int i, int j, int k);
  double at(int var, int i, int j, int k) const;

  void set_zero() { values_.setZero(); }

 private:
  GridSpec spec_{};
  Layout layout_ = Layout::ComponentContiguous;
  int num_vars_ = kNumConserved;
  Eigen::VectorXd values_;
};

/// Periodic wrap of every variable's ghost layers: x first, then y over the
/// x-extended box, then z over the xy-extended box, so edges and corners are
/// populated. Interior values are untouched.
FieldSet& fill_ghosts_periodic(FieldSet& fields);

/// Refreshes the ghost layers of a field: a periodic wrap on a single
/// domain, a halo exchange on a decomposed one.
using GhostFiller = std::function<void(FieldSet&)>;

/// Value-preserving permutation into `target` layout.
FieldSet convert_layout(const FieldSet& fields, Layout target);

/// Copies interior points of `src` into `dst` (same interior size, any
/// layouts); ghosts of `dst` are left as they were.
void copy_interior(const FieldSet& src, FieldSet& dst);

/// Visits interior points in lexicographic order, x innermost.
template <typename Visitor>
void for_each_interior(const GridSpec& spec, Visitor&& visit) {
  for (int k = 0; k < spec.n[2]; ++k)
    for (int j = 0; j < spec.n[1]; ++j)
      for (int i = 0; i < spec.n[0]; ++i) visit(i, j, k);
}

}  // namespace hitdns
