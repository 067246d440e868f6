#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mfglab {

using Point = std::array<double, 2>;

// Uniform tensor grid on the box prod_a [-half_width[a], half_width[a]].
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(int dim, double half_width, int points_per_axis);
  GridSpec(int dim, Point half_width, int points_per_axis);

  int dim() const { return dim_; }
  int points() const { return n_; }
  double half_width(int axis) const { return half_width_[axis]; }
  double spacing(int axis) const { return 2.0 * half_width_[axis] / (n_ - 1); }
  // Spacing of axis 0; equal on all axes for square boxes.
  double h() const { return spacing(0); }
  double cell_volume() const;
  std::size_t size() const;
  // Strides in row-major order, axis 0 slowest.
  std::size_t stride(int axis) const;
  double coordinate(int axis, int i) const { return -half_width_[axis] + i * spacing(axis); }
  std::array<int, 2> multi_index(std::size_t node) const;
  Point position(std::size_t node) const;
  bool on_boundary(std::size_t node, int axis) const;
  // Index of the node at the origin; requires an odd number of points.
  std::size_t center_node() const;

  bool operator==(const GridSpec& o) const;
  bool operator!=(const GridSpec& o) const { return !(*this == o); }

 private:
  int dim_ = 1;
  Point half_width_{1.0, 1.0};
  int n_ = 17;
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double value = 0.0);
  ScalarField(const GridSpec& g, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  bool all_finite() const;
  double max() const;
  double min() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const GridSpec& g);

  const GridSpec& grid() const { return grid_; }
  int components() const { return grid_.dim(); }
  double& operator()(int axis, std::size_t node) { return data_[axis][node]; }
  double operator()(int axis, std::size_t node) const { return data_[axis][node]; }
  const std::vector<double>& component(int axis) const { return data_[axis]; }
  std::vector<double>& component(int axis) { return data_[axis]; }
  double norm(std::size_t node) const;

 private:
  GridSpec grid_;
  std::array<std::vector<double>, 2> data_;
};

enum class UpwindBias { backward, forward, central, monotone_hjb };

// Trapezoid quadrature weights, product over axes.
std::vector<double> trapezoid_weights(const GridSpec& g);

double integrate(const ScalarField& f);
// One-sided (or central) differences; at the boundary the inward one-sided
// difference is used for every bias. monotone_hjb picks per node the
// Godunov switch for the convex Hamiltonian |p|^gamma/gamma.
VectorField gradient_upwind(const ScalarField& u, UpwindBias bias);
// (2 dim + 1)-point Laplacian with mirrored ghost nodes (homogeneous Neumann).
ScalarField laplacian(const ScalarField& f);
// Negative adjoint of the central gradient in the trapezoid inner product.
ScalarField divergence(const VectorField& w);
// Weighted L^p norm (p >= 1).
double lp_norm(const ScalarField& f, double p);

// Tensor-product four-point Lagrange interpolation; points outside the box
// are clamped to the boundary.
double interpolate_cubic(const ScalarField& f, const Point& x);

// Shift a field by whole nodes, filling vacated nodes with the edge value.
// The value at node i of the result is the value of f at node i + offset.
ScalarField shift_nodes(const ScalarField& f, const std::array<int, 2>& offset);

// max over boundary nodes of |f| / max |f|; a truncated box is adequate when
// this is below 1e-10 for the density.
double boundary_ratio(const ScalarField& f);

}  // namespace mfglab
