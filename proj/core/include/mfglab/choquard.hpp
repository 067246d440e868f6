#pragma once

#include "mfglab/grid.hpp"
#include "mfglab/problem.hpp"

namespace mfglab {

struct MFGSolution;

struct ChoquardOptions {
  // Stop when max_j |-2 eps^2 Lap v + (V - K * v^2) v - mu v| <= tol * max v.
  double tol = 1e-10;
  int max_iters = 200000;
};

struct ChoquardState {
  ScalarField v;  // v > 0, sum w v^2 = M
  double mu = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;

  ScalarField density() const;
};

// E_HC(v) = 2 eps^2 <v, -Lap v> + <V, v^2> - coupling/2 <v^2, K * v^2>
double choquard_energy(const ProblemSpec& spec, const ScalarField& v);

// Minimises E_HC on the sphere sum w v^2 = M by a preconditioned projected
// gradient flow (preconditioner (-2 eps^2 Lap + V_+ + s)^{-1})
// with Barzilai-Borwein steps and Armijo backtracking. Requires gamma = 2.
ChoquardState solve_choquard(const ProblemSpec& spec, const ChoquardOptions& options = {});

// Max-norm residual of -2 eps^2 Lap v + (V - K * v^2) v - lambda v for
// v = exp(-u / (2 eps)) rescaled to sum w v^2 = M.
double hopf_cole_roundtrip(const ProblemSpec& spec, const MFGSolution& sol);

}  // namespace mfglab
