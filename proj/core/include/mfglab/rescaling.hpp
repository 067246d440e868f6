#pragma once

#include <array>

#include "mfglab/grid.hpp"
#include "mfglab/mfg.hpp"
#include "mfglab/problem.hpp"

namespace mfglab {

// With D = gamma' - N + alpha:
//   space   = gamma' / D
//   value   = (N - alpha) gamma' / D
//   density = N gamma' / D
//   u_exponent = (gamma'(N - alpha) - gamma' - N + alpha) / D
// m~(y) = eps^density m(eps^space y), u~(y) = eps^u_exponent u(eps^space y),
// lambda~ = eps^value lambda, e~ = eps^value e.
struct ScaleExponents {
  double space = 0.0;
  double value = 0.0;
  double density = 0.0;
  double u_exponent = 0.0;
};

ScaleExponents exponents(int dim, double gamma, double alpha);
ScaleExponents exponents(const ProblemSpec& spec);

// V_eps(y) = eps^value V(eps^space y), as a potential in the rescaled frame.
PotentialSpec rescaled_potential_spec(const ProblemSpec& spec);
double rescaled_potential(const ProblemSpec& spec, const Point& y);
// The rescaled problem: epsilon = 1, potential V_eps, same grid.
ProblemSpec rescaled_problem(const ProblemSpec& spec);

// Original frame (spec.epsilon) to rescaled frame on target_grid by cubic
// interpolation. The result has epsilon = 1 and no policy.
MFGSolution rescale_solution(const ProblemSpec& spec, const MFGSolution& sol, const GridSpec& target_grid);
// Inverse map: rescaled solution back to the original frame of spec.
MFGSolution unrescale_solution(const ProblemSpec& spec, const MFGSolution& rescaled, const GridSpec& target_grid);

// Grid argmin of u (first in row-major order on ties). Throws DomainError
// when it lies on the box boundary.
Point locate_argmin_translation(const MFGSolution& sol);
// Node offset of the argmin of u from the center node.
std::array<int, 2> argmin_offset(const MFGSolution& sol);
// Fields shifted so that the node `offset` away from the center becomes the
// center; u is renormalised to min 0.
MFGSolution recenter(const MFGSolution& sol, const std::array<int, 2>& offset);

}  // namespace mfglab
