#include "mfglab/fokker_planck.hpp"

#include <algorithm>
#include <cmath>

#include "mfglab/error.hpp"

namespace mfglab {

namespace {

// Stationary measure of the jump process by GTH state reduction
// (Grassmann-Taksar-Heyman): Gaussian elimination on the rate matrix in
// which every pivot is a sum of off-diagonal rates, so no subtraction
// occurs and tail values keep full relative accuracy. Elimination of state
// k only couples states in [k - b, k), so the band of width b is closed
// under fill-in.
class BandedRates {
 public:
  BandedRates(std::size_t n, std::size_t b) : b_(b), q_(n * (2 * b + 1), 0.0) {}
  double& at(std::size_t i, std::size_t j) { return q_[i * (2 * b_ + 1) + (j + b_ - i)]; }

 private:
  std::size_t b_;
  std::vector<double> q_;
};

std::vector<double> gth_stationary(const TransportPolicy& policy) {
  const GridSpec& g = policy.grid();
  const std::size_t n = g.size();
  const std::size_t b = g.dim() == 1 ? 1 : g.stride(0);
  BandedRates Q(n, b);
  for (int a = 0; a < g.dim(); ++a)
    for (std::size_t j = 0; j < n; ++j) {
      Q.at(j, policy.plus_neighbor(j, a)) += policy.rate_plus(a)[j];
      Q.at(j, policy.minus_neighbor(j, a)) += policy.rate_minus(a)[j];
    }
  std::vector<double> S(n, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) {
    const std::size_t lo = k >= b ? k - b : 0;
    double s = 0.0;
    for (std::size_t j = lo; j < k; ++j) s += Q.at(k, j);
    if (!(s > 0.0)) throw NumericalError("FP null space is not one dimensional (disconnected numerical support)");
    S[k] = s;
    for (std::size_t i = lo; i < k; ++i) {
      const double qik = Q.at(i, k);
      if (qik == 0.0) continue;
      const double f = qik / s;
      for (std::size_t j = lo; j < k; ++j)
        if (j != i) Q.at(i, j) += f * Q.at(k, j);
    }
  }
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t lo = k >= b ? k - b : 0;
    double t = 0.0;
    for (std::size_t i = lo; i < k; ++i) t += pi[i] * Q.at(i, k);
    pi[k] = t / S[k];
    if (pi[k] > 1e250) {
      for (std::size_t i = 0; i <= k; ++i) pi[i] *= 1e-250;
    }
  }
  return pi;
}

}  // namespace

StationaryDensity solve_stationary(const ProblemSpec& spec, const TransportPolicy& policy) {
  const GridSpec& g = policy.grid();
  const auto W = trapezoid_weights(g);
  const std::size_t n = g.size();
  std::vector<double> mu = gth_stationary(policy);
  double s = 0.0;
  for (double v : mu) s += v;
  if (!(s > 0.0) || !std::isfinite(s)) throw NumericalError("FP stationary measure is degenerate");
  for (double& v : mu) v *= spec.mass / s;

  StationaryDensity out;
  out.m = ScalarField(g);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.m[j] = mu[j] / W[j];
    total += mu[j];
  }
  out.mass_error = std::abs(total - spec.mass) / spec.mass;
  out.positivity_margin = out.m.min();
  const auto r = policy.apply_adjoint(mu);
  for (double v : r) out.residual += std::abs(v);
  const VectorField d = policy.drift();
  out.flux = VectorField(g);
  for (int a = 0; a < g.dim(); ++a)
    for (std::size_t j = 0; j < g.size(); ++j) out.flux(a, j) = out.m[j] * d(a, j);
  out.policy = std::make_shared<TransportPolicy>(policy);
  return out;
}

StationaryDensity solve_stationary(const ProblemSpec& spec, const VectorField& drift) {
  return solve_stationary(spec, policy_from_drift(drift, spec.epsilon, spec.gamma));
}

double kinetic_energy(const ProblemSpec&, const StationaryDensity& dens) {
  const auto W = trapezoid_weights(dens.m.grid());
  const auto& c = dens.policy->cost();
  double s = 0.0;
  for (std::size_t j = 0; j < W.size(); ++j) s += W[j] * dens.m[j] * c[j];
  return s;
}

double normalized_kinetic(const ProblemSpec& spec, const StationaryDensity& dens) {
  const double gc = spec.gamma_conj();
  return gc * kinetic_energy(spec, dens) / std::pow(spec.epsilon, gc);
}

}  // namespace mfglab
