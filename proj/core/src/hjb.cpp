#include "mfglab/hjb.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "mfglab/error.hpp"

namespace mfglab {

namespace {

void solve_policy_system(const TransportPolicy& pol, const ScalarField& f, std::size_t pin,
                         std::vector<double>& u, double& lambda) {
  const std::size_t n = f.size();
  const auto N = static_cast<Eigen::Index>(n);
  const Eigen::SparseMatrix<double> G = pol.generator();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(G.nonZeros() + 2 * n + 1);
  for (Eigen::Index k = 0; k < G.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(G, k); it; ++it)
      trip.emplace_back(it.row(), it.col(), -it.value());
  for (Eigen::Index j = 0; j < N; ++j) trip.emplace_back(j, N, 1.0);
  trip.emplace_back(N, static_cast<Eigen::Index>(pin), 1.0);
  Eigen::SparseMatrix<double> A(N + 1, N + 1);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::VectorXd rhs(N + 1);
  const auto& c = pol.cost();
  for (std::size_t j = 0; j < n; ++j) rhs[static_cast<Eigen::Index>(j)] = f[j] + c[j];
  rhs[N] = 0.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw NumericalError("HJB policy system is singular");
  const Eigen::VectorXd x = lu.solve(rhs);
  u.assign(x.data(), x.data() + n);
  lambda = x[N];
}

ScalarField eikonal_guess(const ProblemSpec& spec, const ScalarField& f) {
  const GridSpec& g = f.grid();
  const auto& fv = f.values();
  const std::size_t jmin = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  const double fmin = fv[jmin];
  const double gam = spec.gamma;
  auto speed = [&](double v) { return std::pow(gam * std::max(v - fmin, 0.0), 1.0 / gam); };
  ScalarField u(g);
  if (g.dim() == 1) {
    const double h = g.h();
    for (std::size_t j = jmin + 1; j < g.size(); ++j) u[j] = u[j - 1] + 0.5 * h * (speed(f[j - 1]) + speed(f[j]));
    for (std::size_t j = jmin; j-- > 0;) u[j] = u[j + 1] + 0.5 * h * (speed(f[j + 1]) + speed(f[j]));
    return u;
  }
  // Trapezoid rule along the segment from the argmin of f.
  const Point x0 = g.position(jmin);
  const int q = 16;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Point x = g.position(j);
    const double len = std::hypot(x[0] - x0[0], x[1] - x0[1]);
    if (len == 0.0) continue;
    double s = 0.0;
    for (int k = 0; k <= q; ++k) {
      const double t = static_cast<double>(k) / q;
      const Point y{x0[0] + t * (x[0] - x0[0]), x0[1] + t * (x[1] - x0[1])};
      s += (k == 0 || k == q ? 0.5 : 1.0) * speed(interpolate_cubic(f, y));
    }
    u[j] = s * len / q;
  }
  return u;
}

}  // namespace

double hjb_residual(const ProblemSpec& spec, const ScalarField& u, double lambda, const ScalarField& f) {
  const OptimalControl oc = optimal_control(u.grid(), spec.epsilon, spec.gamma, u);
  double r = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) r = std::max(r, std::abs(lambda + oc.hamiltonian[j] - f[j]));
  return r;
}

ErgodicSolution solve_ergodic(const ProblemSpec& spec, const ScalarField& f, const HjbOptions& options) {
  const GridSpec& g = spec.grid;
  if (f.grid() != g) throw DomainError("HJB forcing lives on another grid");
  if (!f.all_finite()) throw DomainError("HJB forcing is not finite");
  if (!(spec.gamma > 1.0)) throw DomainError("gamma must exceed 1");
  double fmax = 0.0;
  for (double v : f.values()) fmax = std::max(fmax, std::abs(v));
  const double tol = options.tol * (1.0 + fmax);

  ScalarField u = options.initial_guess ? *options.initial_guess : eikonal_guess(spec, f);
  if (u.grid() != g) throw DomainError("HJB initial guess lives on another grid");
  if (!options.initial_guess) {
    // Cell Peclet number |u(j+1) - u(j)| / (2 eps) of the eikonal profile;
    // the jump rates scale like its exponential.
    double peclet = 0.0;
    for (int a = 0; a < g.dim(); ++a)
      for (std::size_t j = 0; j < g.size(); ++j)
        if (!g.on_boundary(j, a) || g.multi_index(j)[a] == 0)
          peclet = std::max(peclet, std::abs(u[j + g.stride(a)] - u[j]) / (2.0 * spec.epsilon));
    if (peclet > 60.0)
      throw DomainError("grid Peclet number " + std::to_string(peclet) +
                        " exceeds 60 where f is steepest; shrink the box or refine the grid");
  }
  ErgodicSolution sol;
  OptimalControl oc = optimal_control(g, spec.epsilon, spec.gamma, u);
  bool have = false, damped = false;
  double lambda = 0.0, residual = 0.0;
  std::vector<double> ulin;
  for (int it = 0; it < options.max_iters; ++it) {
    if (have) {
      residual = 0.0;
      for (std::size_t j = 0; j < f.size(); ++j)
        residual = std::max(residual, std::abs(lambda + oc.hamiltonian[j] - f[j]));
      sol.trace.push_back(residual);
      if (residual <= tol && !damped) {
        const double umin = u.min();
        for (auto& v : u.values()) v -= umin;
        sol.u = std::move(u);
        sol.lambda = lambda;
        sol.residual = residual;
        sol.iterations = it;
        return sol;
      }
    }
    const std::size_t pin = static_cast<std::size_t>(
        std::min_element(u.values().begin(), u.values().end()) - u.values().begin());
    solve_policy_system(oc.policy, f, pin, ulin, lambda);
    // Backtrack toward the previous iterate while the new policy overflows.
    double theta = 1.0;
    for (;;) {
      ScalarField trial(g);
      for (std::size_t j = 0; j < ulin.size(); ++j) trial[j] = u[j] + theta * (ulin[j] - u[j]);
      if (trial.all_finite()) {
        try {
          OptimalControl next = optimal_control(g, spec.epsilon, spec.gamma, trial);
          sol.policy = std::move(oc.policy);
          oc = std::move(next);
          u = std::move(trial);
          break;
        } catch (const NumericalError&) {
        }
      }
      theta *= 0.5;
      if (theta < 1e-6) throw NumericalError("HJB policy update overflows the transport rates at every step length");
    }
    damped = theta < 1.0;
    have = true;
  }
  throw ConvergenceError("HJB policy iteration did not converge (residual " + std::to_string(residual) + ")",
                         residual, options.max_iters);
}

VectorField optimal_drift(const ProblemSpec& spec, const ScalarField& u) {
  return optimal_control(u.grid(), spec.epsilon, spec.gamma, u).policy.drift();
}

}  // namespace mfglab
