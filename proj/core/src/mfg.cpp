#include "mfglab/mfg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "mfglab/fokker_planck.hpp"
#include "mfglab/riesz.hpp"

namespace mfglab {

namespace {

double scaling_tau(const ProblemSpec& spec) {
  const double gc = spec.gamma_conj();
  return std::pow(spec.epsilon, -gc / (gc - spec.dim + spec.alpha));
}

void normalize(ScalarField& m, double mass) {
  for (auto& v : m.values()) v = std::max(v, 0.0);
  const double s = integrate(m);
  if (!(s > 0.0)) throw DomainError("density has no mass");
  for (auto& v : m.values()) v *= mass / s;
}

MFGSolution assemble(const ProblemSpec& spec, const ErgodicSolution& hjb, const StationaryDensity& fp,
                     const ScalarField& f, int outer) {
  MFGSolution sol;
  sol.u = hjb.u;
  sol.m = fp.m;
  sol.w = fp.flux;
  sol.lambda = hjb.lambda;
  sol.epsilon = spec.epsilon;
  sol.policy = fp.policy;
  sol.fp_residual = fp.residual;
  sol.mass_error = fp.mass_error;
  sol.hjb_residual = hjb.residual;
  sol.outer_iterations = outer;
  const FlowPair pair = sol.pair();
  sol.energy = evaluate_energy(spec, pair);
  sol.linearized_energy = evaluate_linearized_energy(spec, pair, sol.m);
  const double lm = sol.lambda * spec.mass;
  sol.duality_residual = std::abs(lm - sol.linearized_energy) / (std::abs(lm) + 1e-12);
  (void)f;
  return sol;
}

}  // namespace

ScalarField default_initial_density(const ProblemSpec& spec) {
  const GridSpec& g = spec.grid;
  double hmax = 0.0, rmin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.dim(); ++a) {
    hmax = std::max(hmax, g.spacing(a));
    rmin = std::min(rmin, g.half_width(a));
  }
  const double tau = std::clamp(scaling_tau(spec), 8.0 / rmin, 1.0 / (8.0 * hmax));
  // Centred on the grid argmin of V (the origin when V is constant).
  const ScalarField V = spec.sample_potential();
  const auto& vv = V.values();
  const std::size_t jmin = static_cast<std::size_t>(std::min_element(vv.begin(), vv.end()) - vv.begin());
  const Point c = V.max() > V.min() ? g.position(jmin) : Point{0.0, 0.0};
  ScalarField m(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Point x = g.position(j);
    m[j] = std::exp(-tau * std::hypot(x[0] - c[0], g.dim() == 2 ? x[1] - c[1] : 0.0));
  }
  normalize(m, spec.mass);
  return m;
}

MFGSolution solve_mfg(const ProblemSpec& spec, const std::optional<ScalarField>& init_density, double damping) {
  MfgOptions o;
  o.damping = damping;
  return solve_mfg(spec, init_density, o);
}

MFGSolution solve_mfg(const ProblemSpec& spec, const std::optional<ScalarField>& init_density,
                      const MfgOptions& options) {
  spec.validate();
  if (!(options.damping > 0.0 && options.damping <= 1.0)) throw DomainError("damping must lie in (0, 1]");
  const GridSpec& g = spec.grid;
  const auto W = trapezoid_weights(g);
  const std::size_t n = g.size();
  std::shared_ptr<const RieszKernelTable> K;
  if (spec.coupling != 0.0) K = cached_kernel(g, spec.alpha);
  const ScalarField V = spec.sample_potential();

  ScalarField m = init_density ? *init_density : default_initial_density(spec);
  if (m.grid() != g) throw DomainError("initial density lives on another grid");
  normalize(m, spec.mass);

  const double beta = options.damping;
  std::deque<std::vector<double>> X, F;
  HjbOptions hopt = options.hjb;
  std::vector<double> trace;
  double prev_energy = std::numeric_limits<double>::infinity();
  int increases = 0;
  bool anderson = options.anderson_depth > 0;
  std::shared_ptr<MFGSolution> last;
  double diff = std::numeric_limits<double>::infinity();

  for (int k = 0; k < options.max_outer; ++k) {
    ScalarField f = V;
    if (K) {
      const ScalarField km = convolve(*K, m);
      for (std::size_t j = 0; j < n; ++j) f[j] -= spec.coupling * km[j];
    }
    const ErgodicSolution hjb = solve_ergodic(spec, f, hopt);
    hopt.initial_guess = hjb.u;
    const StationaryDensity fp = solve_stationary(spec, hjb.policy);

    std::vector<double> r(n);
    diff = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      r[j] = fp.m[j] - m[j];
      diff += W[j] * std::abs(r[j]);
    }
    trace.push_back(diff);

    if (diff < options.tol * spec.mass) {
      MFGSolution sol = assemble(spec, hjb, fp, f, k + 1);
      sol.trace = std::move(trace);
      if (sol.duality_residual > options.duality_tol)
        throw NumericalError("duality identity lambda M = linearized energy violated: relative gap " +
                             std::to_string(sol.duality_residual));
      return sol;
    }

    // Oscillation detector on the energy of the FP output.
    {
      const FlowPair pair{fp.m, fp.flux, fp.policy};
      const double e = evaluate_energy(spec, pair).total;
      if (e > prev_energy + 1e-12 * (1.0 + std::abs(prev_energy))) {
        if (++increases >= 5 && anderson) {
          // Anderson steps need not decrease the energy; fall back to the
          // plain damped iteration before declaring oscillation.
          anderson = false;
          increases = 0;
          X.clear();
          F.clear();
        } else if (increases >= 5) {
          auto bad = std::make_shared<MFGSolution>(assemble(spec, hjb, fp, f, k + 1));
          bad->trace = trace;
          throw MfgSolveError("MFG iteration oscillates (energy rose 5 times in a row); reduce damping", diff,
                              k + 1, bad);
        }
      } else {
        increases = 0;
      }
      prev_energy = e;
      if (k + 1 == options.max_outer) {
        last = std::make_shared<MFGSolution>(assemble(spec, hjb, fp, f, k + 1));
        last->trace = trace;
      }
    }

    std::vector<double> next(n);
    for (std::size_t j = 0; j < n; ++j) next[j] = m[j] + beta * r[j];
    if (anderson) {
      X.push_back(m.values());
      F.push_back(r);
      while (static_cast<int>(X.size()) > options.anderson_depth + 1) {
        X.pop_front();
        F.pop_front();
      }
      if (X.size() > 1) {
        const auto cols = static_cast<Eigen::Index>(X.size() - 1);
        Eigen::MatrixXd dF(static_cast<Eigen::Index>(n), cols), dX(static_cast<Eigen::Index>(n), cols);
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) {
          const double sw = std::sqrt(W[j]);
          const auto jj = static_cast<Eigen::Index>(j);
          rhs[jj] = sw * r[j];
          for (Eigen::Index c = 0; c < cols; ++c) {
            dF(jj, c) = F[c + 1][j] - F[c][j];
            dX(jj, c) = X[c + 1][j] - X[c][j];
          }
        }
        Eigen::MatrixXd wdF = dF;
        for (std::size_t j = 0; j < n; ++j) wdF.row(static_cast<Eigen::Index>(j)) *= std::sqrt(W[j]);
        // Ridge-regularised normal equations keep the coefficients bounded
        // when the history columns become nearly collinear.
        Eigen::MatrixXd AtA = wdF.transpose() * wdF;
        const double ridge = 1e-10 * AtA.trace() / static_cast<double>(cols);
        AtA.diagonal().array() += ridge;
        const Eigen::VectorXd gam = AtA.ldlt().solve(wdF.transpose() * rhs);
        if (gam.allFinite()) {
          const Eigen::VectorXd corr = (dX + beta * dF) * gam;
          for (std::size_t j = 0; j < n; ++j) next[j] -= corr[static_cast<Eigen::Index>(j)];
        } else {
          X.clear();
          F.clear();
        }
      }
    }
    m = ScalarField(g, std::move(next));
    normalize(m, spec.mass);
  }
  throw MfgSolveError("MFG fixed point did not converge in " + std::to_string(options.max_outer) +
                          " outer iterations (last L1 change " + std::to_string(diff) + ")",
                      diff, options.max_outer, last);
}

double minimized_energy(const MFGSolution& sol) { return sol.energy.total; }

EnergyBoundProbe two_sided_energy_bound_probe(const ProblemSpec& spec, const MfgOptions& options) {
  EnergyBoundProbe p;
  p.tau_scaling = scaling_tau(spec);
  p.upper_certificate = std::numeric_limits<double>::infinity();
  double rmin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < spec.dim; ++a) rmin = std::min(rmin, spec.grid.half_width(a));
  for (int k = 0; k <= 16; ++k) {
    const double tau = p.tau_scaling * std::pow(10.0, -1.0 + k / 8.0);
    if (tau * rmin < 20.0) continue;  // profile truncated by the box
    try {
      const double e = evaluate_energy(spec, build_test_pair(spec, tau)).total;
      if (e < p.upper_certificate) {
        p.upper_certificate = e;
        p.tau_best = tau;
      }
    } catch (const DomainError&) {
      // under-resolved tau
    }
  }
  p.lower_certificate = minimized_energy(solve_mfg(spec, std::nullopt, options));
  return p;
}

}  // namespace mfglab
