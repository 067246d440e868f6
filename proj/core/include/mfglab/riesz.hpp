#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "mfglab/grid.hpp"

namespace mfglab {

// Cell-averaged samples of K_alpha(x) = |x|^{alpha-N} at every node offset
// of a grid, plus the transform of the zero-padded table.
class RieszKernelTable {
 public:
  double alpha() const { return alpha_; }
  const GridSpec& grid() const { return grid_; }
  double origin_value() const { return value(0, 0); }
  // Offsets range over -(n-1)..(n-1) per axis.
  double value(int k0, int k1 = 0) const;
  const std::vector<double>& cell_values() const { return cells_; }
  int padded_points() const { return padded_; }
  const std::vector<std::complex<double>>& spectrum() const { return spectrum_; }

 private:
  friend RieszKernelTable tabulate_kernel(const GridSpec&, double);
  double alpha_ = 0.0;
  GridSpec grid_;
  std::vector<double> cells_;
  int padded_ = 0;
  std::vector<std::complex<double>> spectrum_;
};

RieszKernelTable tabulate_kernel(const GridSpec& grid, double alpha);
// Shared table for (grid, alpha); built once and reused.
std::shared_ptr<const RieszKernelTable> cached_kernel(const GridSpec& grid, double alpha);

// Average of |x|^{alpha-N} over the cell of size h (1D) or hx x hy (2D)
// centered at offset k*h.
double riesz_cell_average_1d(int k, double h, double alpha);
double riesz_cell_average_2d(int i, int j, double hx, double hy, double alpha);

// (K * m)(x_i) = sum_j K(x_i - x_j) m_j w_j with trapezoid weights w_j,
// evaluated as a linear (non-circular) convolution on the padded grid.
ScalarField convolve(const RieszKernelTable& kernel, const ScalarField& m);
// sum_i w_i m_i (K * m)_i
double interaction_energy(const RieszKernelTable& kernel, const ScalarField& m);
// sum_i w_i a_i (K * b)_i
double interaction_energy(const RieszKernelTable& kernel, const ScalarField& a, const ScalarField& b);

}  // namespace mfglab
