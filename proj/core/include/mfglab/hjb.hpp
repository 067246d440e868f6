#pragma once

#include <optional>
#include <vector>

#include "mfglab/grid.hpp"
#include "mfglab/problem.hpp"
#include "mfglab/transport.hpp"

namespace mfglab {

struct HjbOptions {
  // Stop when max_j |lambda + H_j(u) - f_j| <= tol * (1 + max|f|).
  double tol = 1e-11;
  int max_iters = 100;
  // Warm start; without it the solve starts from the eikonal profile
  // int (gamma (f - min f)_+)^{1/gamma} along rays from the argmin of f.
  std::optional<ScalarField> initial_guess;
};

struct ErgodicSolution {
  ScalarField u;  // min u = 0
  double lambda = 0.0;
  double residual = 0.0;
  int iterations = 0;
  // Policy of the last linear solve: (u, lambda) solve
  // -G u + lambda = f + c exactly for it.
  TransportPolicy policy;
  std::vector<double> trace;  // residual per policy iteration
};

// Ergodic problem -eps Lap u + |grad u|^gamma / gamma + lambda = f in the
// controlled jump-process discretisation, by Howard policy iteration with
// the bordered normalisation row u(argmin) = 0.
ErgodicSolution solve_ergodic(const ProblemSpec& spec, const ScalarField& f, const HjbOptions& options = {});

// Drift of the optimal control at u (approximates -grad u |grad u|^{gamma-2}).
VectorField optimal_drift(const ProblemSpec& spec, const ScalarField& u);

// max_j |lambda + H_j(u) - f_j|
double hjb_residual(const ProblemSpec& spec, const ScalarField& u, double lambda, const ScalarField& f);

}  // namespace mfglab
