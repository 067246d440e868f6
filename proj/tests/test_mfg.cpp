#include <gtest/gtest.h>

#include <cmath>

#include "mfglab/error.hpp"
#include "mfglab/hjb.hpp"
#include "mfglab/mfg.hpp"

using namespace mfglab;

namespace {

ProblemSpec desk_spec() {
  ProblemSpec s;
  s.grid = GridSpec(1, 8.0, 513);
  return s;
}

}  // namespace

TEST(Mfg, DecoupledHarmonicConvergesImmediately) {
  ProblemSpec s = desk_spec();
  s.coupling = 0.0;
  s.potential.center = {0.0, 0.0};
  s.potential.value_scale = 0.5;
  // Undamped, the second best response reproduces the first.
  const MFGSolution sol = solve_mfg(s, std::nullopt, 1.0);
  EXPECT_LE(sol.outer_iterations, 2);
  EXPECT_LE(solve_mfg(s, std::nullopt).outer_iterations, 3);
  const ErgodicSolution hjb = solve_ergodic(s, s.sample_potential());
  EXPECT_NEAR(sol.lambda, hjb.lambda, 1e-13);
  // -2 v'' + x^2/2 v = lambda v: lambda = 1, u = x^2/2, m ~ exp(-x^2/2).
  EXPECT_NEAR(sol.lambda, 1.0, 1e-4);
  double err = 0.0;
  const double c = sol.m[s.grid.center_node()];
  for (std::size_t j = 0; j < sol.m.size(); ++j) {
    const double x = s.grid.position(j)[0];
    err = std::max(err, std::abs(sol.m[j] - c * std::exp(-0.5 * x * x)));
  }
  EXPECT_LT(err / c, 1e-4);
}

TEST(Mfg, FrozenReferenceLambda) {
  const MFGSolution sol = solve_mfg(desk_spec(), std::nullopt);
  EXPECT_NEAR(sol.lambda, -0.2093810742, 5e-10);
  EXPECT_LT(sol.duality_residual, 1e-6);
  EXPECT_LT(sol.mass_error, 1e-12);
  EXPECT_GE(sol.m.min(), 0.0);
  EXPECT_LT(sol.trace.back(), 1e-8);
  // Duality: lambda M equals the linearised energy at the returned density.
  EXPECT_NEAR(sol.lambda * 1.0, sol.linearized_energy, 1e-6 * std::abs(sol.lambda));
}

TEST(Mfg, TranslationCovariance) {
  ProblemSpec s;
  s.grid = GridSpec(1, 16.0, 513);
  s.potential.center = {0.0, 0.0};
  const MFGSolution a = solve_mfg(s, std::nullopt);
  s.potential.center = {1.0, 0.0};  // 16 nodes
  const MFGSolution b = solve_mfg(s, std::nullopt);
  EXPECT_NEAR(a.lambda, b.lambda, 1e-7);
  const ScalarField back = shift_nodes(b.m, {16, 0});
  double err = 0.0;
  for (std::size_t j = 64; j + 64 < s.grid.size(); ++j) err = std::max(err, std::abs(back[j] - a.m[j]));
  EXPECT_LT(err, 1e-6 * a.m.max());
}

TEST(Mfg, IterationCapCarriesLastIterate) {
  MfgOptions o;
  o.max_outer = 1;
  try {
    solve_mfg(desk_spec(), std::nullopt, o);
    FAIL() << "expected MfgSolveError";
  } catch (const MfgSolveError& e) {
    ASSERT_TRUE(e.last_iterate());
    EXPECT_EQ(e.last_iterate()->outer_iterations, 1);
    EXPECT_GT(e.last_residual(), 0.0);
  }
}

TEST(Mfg, RejectsBadDamping) {
  EXPECT_THROW(solve_mfg(desk_spec(), std::nullopt, 0.0), DomainError);
  EXPECT_THROW(solve_mfg(desk_spec(), std::nullopt, 1.5), DomainError);
}

TEST(Mfg, PlainPicardAgreesWithAnderson) {
  MfgOptions o;
  o.anderson_depth = 0;
  o.max_outer = 400;
  const MFGSolution plain = solve_mfg(desk_spec(), std::nullopt, o);
  EXPECT_NEAR(plain.lambda, -0.2093810742, 5e-9);
}

TEST(Mfg, MinimisedEnergyBelowTestPairs) {
  const ProblemSpec s = desk_spec();
  const MFGSolution sol = solve_mfg(s, std::nullopt);
  for (double tau : {0.5, 1.0, 2.0, 4.0})
    EXPECT_LE(minimized_energy(sol), evaluate_energy(s, build_test_pair(s, tau)).total);
}
