#pragma once

#include <memory>
#include <vector>

#include "mfglab/grid.hpp"

namespace mfglab {

enum class PotentialKind { zero, power, shifted_power, multi_well, custom_table };

struct Well {
  Point center{0.0, 0.0};
  double b = 2.0;
};

// V(x) = value_scale * V0(coord_scale * (x + shift)) where V0 is one of
//   zero:          0
//   power:         |x - center|^b
//   shifted_power: max(|x - center| - r0, 0)^b
//   multi_well:    amplitude * prod_i |x - c_i|^{b_i}
//   custom_table:  cubic interpolation of a stored field
// The frame fields let the same spec describe V_eps(y + y_eps).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::power;
  double b = 2.0;
  double C_V = 0.0;  // 0 means "use the smallest admissible constant"
  Point center{0.3, 0.0};
  double r0 = 0.0;
  double amplitude = 1.0;
  std::vector<Well> wells;
  std::shared_ptr<const ScalarField> table;

  double value_scale = 1.0;
  double coord_scale = 1.0;
  Point shift{0.0, 0.0};

  double operator()(const Point& x, int dim) const;
  // Growth exponent b of the bound C_V^{-1}(|x|-C_V)_+^b <= V <= C_V(1+|x|)^b.
  double growth() const;
  // Points where V0 vanishes (original frame), used as candidate
  // concentration points.
  std::vector<Point> minimizers(int dim) const;
};

struct ProblemSpec {
  int dim = 1;
  double gamma = 2.0;
  double alpha = 0.5;
  double mass = 1.0;
  double epsilon = 1.0;
  // Weight of the coupling K_alpha * m; 1 for the model, 0 decouples.
  double coupling = 1.0;
  PotentialSpec potential;
  GridSpec grid{1, 24.0, 1537};

  double gamma_conj() const { return gamma / (gamma - 1.0); }
  // Throws DomainError when an invariant is violated.
  void validate() const;
  ScalarField sample_potential() const;
};

// Smallest C_V for which the power-type kinds satisfy the two-sided bound.
double minimal_comparability_constant(const PotentialSpec& v, int dim);

}  // namespace mfglab
