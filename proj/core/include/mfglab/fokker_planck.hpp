#pragma once

#include <memory>

#include "mfglab/grid.hpp"
#include "mfglab/problem.hpp"
#include "mfglab/transport.hpp"

namespace mfglab {

struct StationaryDensity {
  ScalarField m;
  VectorField flux;  // m * drift
  double mass_error = 0.0;         // |sum w m - M| / M
  double positivity_margin = 0.0;  // min m
  double residual = 0.0;           // sum |G^T (w m)|
  std::shared_ptr<const TransportPolicy> policy;
};

// Stationary law of the jump process: the nonnegative null vector of G^T,
// normalised to mass M. Computed by subtraction-free state reduction, so
// the density keeps relative accuracy deep in the tails. A state with no
// remaining exit during the reduction means the null space is not one
// dimensional.
StationaryDensity solve_stationary(const ProblemSpec& spec, const TransportPolicy& policy);
// Drift-only entry point; rates from policy_from_drift.
StationaryDensity solve_stationary(const ProblemSpec& spec, const VectorField& drift);

// Action sum_j w_j m_j c_j, the discrete int m |w/m|^{gamma'} / gamma'.
double kinetic_energy(const ProblemSpec& spec, const StationaryDensity& dens);
// E = gamma' kinetic / eps^{gamma'}
double normalized_kinetic(const ProblemSpec& spec, const StationaryDensity& dens);

}  // namespace mfglab
