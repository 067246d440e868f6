#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "mfglab/energy.hpp"
#include "mfglab/error.hpp"
#include "mfglab/hjb.hpp"

namespace mfglab {

struct MfgOptions {
  double damping = 0.5;
  // Converged when ||m_{k+1} - m_k||_{L1} < tol * M.
  double tol = 1e-8;
  int max_outer = 200;
  // Anderson mixing depth over the damped Picard map; 0 gives plain
  // damped Picard.
  int anderson_depth = 6;
  double duality_tol = 1e-6;
  HjbOptions hjb;
};

struct MFGSolution {
  ScalarField u;
  ScalarField m;
  VectorField w;
  double lambda = 0.0;
  double epsilon = 0.0;
  EnergyBreakdown energy;
  double linearized_energy = 0.0;
  double fp_residual = 0.0;
  double duality_residual = 0.0;
  double hjb_residual = 0.0;
  double mass_error = 0.0;
  int outer_iterations = 0;
  std::shared_ptr<const TransportPolicy> policy;
  std::vector<double> trace;  // L1 change of m per outer iteration

  FlowPair pair() const { return FlowPair{m, w, policy}; }
};

// Raised when the outer iteration fails; carries the last iterate.
class MfgSolveError : public ConvergenceError {
 public:
  MfgSolveError(const std::string& what, double last_residual, int iterations,
                std::shared_ptr<const MFGSolution> last)
      : ConvergenceError(what, last_residual, iterations), last_(std::move(last)) {}
  const std::shared_ptr<const MFGSolution>& last_iterate() const { return last_; }

 private:
  std::shared_ptr<const MFGSolution> last_;
};

// Fixed point m -> FP(HJB(V - K * m)) with damping and Anderson mixing.
MFGSolution solve_mfg(const ProblemSpec& spec, const std::optional<ScalarField>& init_density,
                      const MfgOptions& options = {});
MFGSolution solve_mfg(const ProblemSpec& spec, const std::optional<ScalarField>& init_density, double damping);

double minimized_energy(const MFGSolution& sol);

// Test-pair density at tau = eps^{-gamma'/(gamma'-N+alpha)}, clipped to what
// the grid resolves, centred on the grid argmin of V.
ScalarField default_initial_density(const ProblemSpec& spec);

}  // namespace mfglab
