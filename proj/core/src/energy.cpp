#include "mfglab/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mfglab/error.hpp"
#include "mfglab/riesz.hpp"

namespace mfglab {

double lagrangian_density(double m, std::span<const double> w, double gamma_conj) {
  if (m < 0.0) throw DomainError("lagrangian_density: negative density");
  double wn2 = 0.0;
  for (double c : w) wn2 += c * c;
  if (m == 0.0) return wn2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  // |w|^{g'} / (g' m^{g'-1})
  return std::pow(std::sqrt(wn2), gamma_conj) / (gamma_conj * std::pow(m, gamma_conj - 1.0));
}

double kinetic_term(const ProblemSpec& spec, const FlowPair& pair) {
  const GridSpec& g = pair.m.grid();
  const auto W = trapezoid_weights(g);
  double s = 0.0;
  if (pair.policy) {
    if (pair.policy->grid() != g) throw DomainError("flow pair policy lives on another grid");
    const auto& c = pair.policy->cost();
    for (std::size_t j = 0; j < W.size(); ++j) s += W[j] * pair.m[j] * c[j];
    return s;
  }
  const double gc = spec.gamma_conj();
  double w[2];
  for (std::size_t j = 0; j < W.size(); ++j) {
    for (int a = 0; a < g.dim(); ++a) w[a] = pair.w(a, j);
    const double m = pair.m[j] < 0.0 && pair.m[j] >= -1e-12 ? 0.0 : pair.m[j];
    s += W[j] * lagrangian_density(m, std::span<const double>(w, g.dim()), gc);
  }
  return s;
}

EnergyBreakdown evaluate_energy(const ProblemSpec& spec, const FlowPair& pair) {
  EnergyBreakdown e;
  e.kinetic = kinetic_term(spec, pair);
  const ScalarField V = spec.sample_potential();
  const auto W = trapezoid_weights(pair.m.grid());
  for (std::size_t j = 0; j < W.size(); ++j) e.potential += W[j] * V[j] * pair.m[j];
  if (spec.coupling != 0.0) {
    auto K = cached_kernel(pair.m.grid(), spec.alpha);
    e.interaction = spec.coupling * interaction_energy(*K, pair.m);
  }
  e.total = e.kinetic + e.potential - 0.5 * e.interaction;
  return e;
}

double evaluate_linearized_energy(const ProblemSpec& spec, const FlowPair& pair, const ScalarField& frozen) {
  const double kin = kinetic_term(spec, pair);
  const ScalarField V = spec.sample_potential();
  const auto W = trapezoid_weights(pair.m.grid());
  double pot = 0.0;
  for (std::size_t j = 0; j < W.size(); ++j) pot += W[j] * V[j] * pair.m[j];
  double cross = 0.0;
  if (spec.coupling != 0.0) {
    auto K = cached_kernel(pair.m.grid(), spec.alpha);
    cross = spec.coupling * interaction_energy(*K, pair.m, frozen);
  }
  return kin + pot - cross;
}

double evaluate_limit_energy(const ProblemSpec& spec, const FlowPair& pair) {
  const double kin = kinetic_term(spec, pair);
  double inter = 0.0;
  if (spec.coupling != 0.0) {
    auto K = cached_kernel(pair.m.grid(), spec.alpha);
    inter = spec.coupling * interaction_energy(*K, pair.m);
  }
  return kin - 0.5 * inter;
}

double continuity_residual(const ProblemSpec& spec, const FlowPair& pair) {
  const GridSpec& g = pair.m.grid();
  const auto W = trapezoid_weights(g);
  double s = 0.0;
  if (pair.policy) {
    std::vector<double> mu(W.size());
    for (std::size_t j = 0; j < W.size(); ++j) mu[j] = W[j] * pair.m[j];
    const auto r = pair.policy->apply_adjoint(mu);
    for (double v : r) s += std::abs(v);
    return s;
  }
  const ScalarField lap = laplacian(pair.m);
  const ScalarField div = divergence(pair.w);
  for (std::size_t j = 0; j < W.size(); ++j) s += W[j] * std::abs(spec.epsilon * lap[j] - div[j]);
  return s;
}

double test_pair_i1(int dim) { return dim == 1 ? 0.5 : 1.0 / (2.0 * std::numbers::pi); }

FlowPair build_test_pair(const ProblemSpec& spec, double tau) {
  if (!(tau > 0.0)) throw DomainError("test pair needs tau > 0");
  const GridSpec& g = spec.grid;
  for (int a = 0; a < g.dim(); ++a)
    if (tau * g.spacing(a) > 1.0 / 8.0)
      throw DomainError("test pair under-resolved: fewer than 8 points per e-fold");
  ScalarField psi(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Point x = g.position(j);
    psi[j] = spec.epsilon * tau * std::hypot(x[0], g.dim() == 2 ? x[1] : 0.0);
  }
  ScalarField m(g);
  for (std::size_t j = 0; j < g.size(); ++j) m[j] = std::exp(-psi[j] / spec.epsilon);
  const double scale = spec.mass / integrate(m);
  for (auto& v : m.values()) v *= scale;
  auto pol = std::make_shared<TransportPolicy>(gibbs_policy(psi, spec.epsilon, spec.gamma));
  const VectorField d = pol->drift();
  VectorField w(g);
  for (int a = 0; a < g.dim(); ++a)
    for (std::size_t j = 0; j < g.size(); ++j) w(a, j) = m[j] * d(a, j);
  return FlowPair{std::move(m), std::move(w), std::move(pol)};
}

double hls_ratio(const ProblemSpec& spec, const ScalarField& m) {
  auto K = cached_kernel(m.grid(), spec.alpha);
  const double p = 2.0 * spec.dim / (spec.dim + spec.alpha);
  const double nrm = lp_norm(m, p);
  return interaction_energy(*K, m) / (nrm * nrm);
}

double hls_sharp_constant(int dim, double alpha) {
  const double N = dim, lam = dim - alpha;
  return std::pow(std::numbers::pi, 0.5 * lam) * std::tgamma(0.5 * N - 0.5 * lam) / std::tgamma(N - 0.5 * lam) *
         std::pow(std::tgamma(0.5 * N) / std::tgamma(N), -1.0 + lam / N);
}

double kinetic_lbeta_ratio(const ProblemSpec& spec, const ScalarField& m, double kinetic) {
  const double gc = spec.gamma_conj();
  const double beta = 2.0 * spec.dim / (spec.dim + spec.alpha);
  const double k = 2.0 * gc / (spec.dim - spec.alpha);
  const double E = gc * kinetic / std::pow(spec.epsilon, gc);
  return std::pow(lp_norm(m, beta), k) / (std::pow(spec.mass, k - 1.0) * E);
}

}  // namespace mfglab
