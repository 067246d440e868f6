#pragma once

#include <memory>
#include <span>

#include "mfglab/grid.hpp"
#include "mfglab/problem.hpp"
#include "mfglab/transport.hpp"

namespace mfglab {

// Density-flux pair. When `policy` is set the pair is the occupation
// measure of that jump process: w = m * drift, the kinetic term is the
// discrete action sum_j w_j m_j c_j and feasibility is G^T (w m) = 0.
// Without a policy the kinetic term is the nodal integral of m L(w/m).
struct FlowPair {
  ScalarField m;
  VectorField w;
  std::shared_ptr<const TransportPolicy> policy;
};

struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double interaction = 0.0;
  double total = 0.0;
};

// m |w/m|^{gamma'} / gamma' for m > 0; 0 for m = w = 0; +inf for m = 0, w != 0.
double lagrangian_density(double m, std::span<const double> w, double gamma_conj);

double kinetic_term(const ProblemSpec& spec, const FlowPair& pair);
EnergyBreakdown evaluate_energy(const ProblemSpec& spec, const FlowPair& pair);
// Kinetic + potential - coupling * <m, K * frozen>.
double evaluate_linearized_energy(const ProblemSpec& spec, const FlowPair& pair, const ScalarField& frozen);
// Kinetic - interaction/2, ignoring V.
double evaluate_limit_energy(const ProblemSpec& spec, const FlowPair& pair);
// Weighted L1 norm of eps Lap m - div w (or of G^T(w m) for policy pairs).
double continuity_residual(const ProblemSpec& spec, const FlowPair& pair);

// m(x) = M tau^N I1 exp(-tau |x|), normalised on the grid, carried by the
// jump process whose stationary law it is (so w ~ eps grad m).
FlowPair build_test_pair(const ProblemSpec& spec, double tau);
// 1 / int exp(-|x|) dx in dimension N.
double test_pair_i1(int dim);

struct EnergyBoundProbe {
  double lower_certificate = 0.0;
  double upper_certificate = 0.0;
  double tau_scaling = 0.0;
  double tau_best = 0.0;
};

struct MfgOptions;
// Upper certificate: min over 17 log-spaced tau spanning two decades around
// eps^{-gamma'/(gamma'-N+alpha)} of the test-pair energy. Lower certificate:
// the minimised energy from the MFG solver.
EnergyBoundProbe two_sided_energy_bound_probe(const ProblemSpec& spec, const MfgOptions& options);

// Ledger ratios.
// I(m) / ||m||^2_{L^{2N/(N+alpha)}}
double hls_ratio(const ProblemSpec& spec, const ScalarField& m);
// Sharp HLS constant for the kernel |x|^{alpha-N} with equal exponents.
double hls_sharp_constant(int dim, double alpha);
// ||m||_{L^{2N/(N+alpha)}}^{2 gamma'/(N-alpha)} / (M^{2 gamma'/(N-alpha) - 1} E),
// E = gamma' kinetic / eps^{gamma'}.
double kinetic_lbeta_ratio(const ProblemSpec& spec, const ScalarField& m, double kinetic);

}  // namespace mfglab
