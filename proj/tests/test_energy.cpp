#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mfglab/energy.hpp"
#include "mfglab/error.hpp"
#include "mfglab/mfg.hpp"
#include "mfglab/riesz.hpp"

using namespace mfglab;

namespace {

ProblemSpec desk_spec() {
  ProblemSpec s;
  s.grid = GridSpec(1, 8.0, 513);
  return s;
}

}  // namespace

TEST(Lagrangian, FormulaCases) {
  const double zero[1] = {0.0};
  const double four[1] = {4.0};
  EXPECT_EQ(lagrangian_density(1.0, zero, 2.0), 0.0);
  EXPECT_EQ(lagrangian_density(0.0, zero, 2.0), 0.0);
  EXPECT_TRUE(std::isinf(lagrangian_density(0.0, four, 2.0)));
  EXPECT_DOUBLE_EQ(lagrangian_density(2.0, four, 2.0), 4.0);
  const double w2[2] = {3.0, 4.0};
  EXPECT_NEAR(lagrangian_density(1.0, w2, 1.5), std::pow(5.0, 1.5) / 1.5, 1e-12);
  EXPECT_THROW(lagrangian_density(-1.0, zero, 2.0), DomainError);
}

TEST(Lagrangian, JointlyConvex) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> um(0.01, 3.0), uw(-3.0, 3.0), ut(0.0, 1.0);
  for (double gc : {1.5, 2.0, 3.0})
    for (int k = 0; k < 500; ++k) {
      const double m1 = um(rng), m2 = um(rng), t = ut(rng);
      const double w1[2] = {uw(rng), uw(rng)}, w2[2] = {uw(rng), uw(rng)};
      const double wt[2] = {t * w1[0] + (1 - t) * w2[0], t * w1[1] + (1 - t) * w2[1]};
      const double mix = lagrangian_density(t * m1 + (1 - t) * m2, wt, gc);
      const double chord = t * lagrangian_density(m1, w1, gc) + (1 - t) * lagrangian_density(m2, w2, gc);
      EXPECT_LE(mix, chord * (1.0 + 1e-12) + 1e-14);
    }
}

TEST(Energy, PureInteractionIsNegative) {
  ProblemSpec s = desk_spec();
  s.potential.kind = PotentialKind::zero;
  ScalarField m(s.grid);
  for (std::size_t j = 0; j < m.size(); ++j) m[j] = std::exp(-std::pow(s.grid.position(j)[0], 2));
  const EnergyBreakdown e = evaluate_energy(s, FlowPair{m, VectorField(s.grid), nullptr});
  EXPECT_EQ(e.kinetic, 0.0);
  EXPECT_EQ(e.potential, 0.0);
  EXPECT_GT(e.interaction, 0.0);
  EXPECT_DOUBLE_EQ(e.total, -0.5 * e.interaction);
}

TEST(Energy, LinearizedIdentities) {
  const ProblemSpec s = desk_spec();
  const FlowPair p = build_test_pair(s, 1.0);
  const EnergyBreakdown e = evaluate_energy(s, p);
  EXPECT_NEAR(evaluate_linearized_energy(s, p, ScalarField(s.grid)), e.kinetic + e.potential, 1e-14);
  EXPECT_NEAR(evaluate_linearized_energy(s, p, p.m), e.total - 0.5 * e.interaction, 1e-13);
  EXPECT_NEAR(evaluate_limit_energy(s, p), e.kinetic - 0.5 * e.interaction, 1e-14);
}

TEST(TestPair, MassNormalisationAndI1) {
  const ProblemSpec s = desk_spec();
  EXPECT_DOUBLE_EQ(test_pair_i1(1), 0.5);
  EXPECT_NEAR(test_pair_i1(2), 1.0 / (2.0 * std::numbers::pi), 1e-16);
  for (double tau : {1.0, 2.0, 3.5}) EXPECT_NEAR(integrate(build_test_pair(s, tau).m), s.mass, 1e-12);
  EXPECT_THROW(build_test_pair(s, 10.0), DomainError);  // 8 points per e-fold needs tau h <= 1/8
  EXPECT_THROW(build_test_pair(s, 0.0), DomainError);
}

TEST(TestPair, KineticAndInteractionScaling) {
  ProblemSpec s;
  s.grid = GridSpec(1, 24.0, 6145);
  // gamma' kinetic = M eps^2 tau^2 for w = eps grad m with m ~ exp(-tau|x|).
  const FlowPair p1 = build_test_pair(s, 1.0), p2 = build_test_pair(s, 2.0);
  EXPECT_NEAR(s.gamma_conj() * kinetic_term(s, p1), s.mass, 1e-4);
  EXPECT_NEAR(s.gamma_conj() * kinetic_term(s, p2), 4.0 * s.mass, 4e-4);
  // The interaction scales as tau^{N - alpha}.
  auto K = cached_kernel(s.grid, s.alpha);
  const double r = interaction_energy(*K, p2.m) / interaction_energy(*K, p1.m);
  EXPECT_NEAR(r, std::sqrt(2.0), 1e-4);
}

TEST(ContinuityResidual, GibbsPairIsStationary) {
  const ProblemSpec s = desk_spec();
  const FlowPair p = build_test_pair(s, 1.5);
  std::vector<double> mu(p.m.size());
  const auto W = trapezoid_weights(s.grid);
  double scale = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) scale += W[j] * p.m[j] * s.epsilon / (s.grid.h() * s.grid.h());
  EXPECT_LT(continuity_residual(s, p), 1e-13 * scale);
}

TEST(ContinuityResidual, StencilPathDetectsMissingFlux) {
  const ProblemSpec s = desk_spec();
  ScalarField uni(s.grid, 1.0 / 16.0), gauss(s.grid);
  for (std::size_t j = 0; j < gauss.size(); ++j) gauss[j] = std::exp(-std::pow(s.grid.position(j)[0], 2));
  EXPECT_LT(continuity_residual(s, FlowPair{uni, VectorField(s.grid), nullptr}), 1e-14);
  const double r = continuity_residual(s, FlowPair{gauss, VectorField(s.grid), nullptr});
  const ScalarField lap = laplacian(gauss);
  const auto W = trapezoid_weights(s.grid);
  double oracle = 0.0;
  for (std::size_t j = 0; j < W.size(); ++j) oracle += W[j] * s.epsilon * std::abs(lap[j]);
  EXPECT_GT(r, 0.0);
  EXPECT_NEAR(r, oracle, 1e-13);
}

TEST(Hls, RatioBelowSharpConstant) {
  const ProblemSpec s = desk_spec();
  const double C = hls_sharp_constant(1, 0.5);
  for (double tau : {0.5, 1.0, 3.0}) {
    const FlowPair p = build_test_pair(s, tau);
    const double r = hls_ratio(s, p.m);
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, C);
  }
}

TEST(EnergyBoundProbe, UpperCertificateAboveMinimum) {
  MfgOptions o;
  const EnergyBoundProbe p = two_sided_energy_bound_probe(desk_spec(), o);
  EXPECT_TRUE(std::isfinite(p.lower_certificate));
  EXPECT_TRUE(std::isfinite(p.upper_certificate));
  EXPECT_GE(p.upper_certificate, p.lower_certificate);
  EXPECT_GT(p.tau_best, 0.0);
}
