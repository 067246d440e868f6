#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mfglab/fokker_planck.hpp"

using namespace mfglab;

namespace {

ProblemSpec spec_on(const GridSpec& g, double eps = 1.0, double gamma = 2.0) {
  ProblemSpec s;
  s.grid = g;
  s.epsilon = eps;
  s.gamma = gamma;
  if (gamma != 2.0) s.alpha = 0.7;
  return s;
}

VectorField drift_of(const GridSpec& g, auto&& fn) {
  VectorField d(g);
  for (std::size_t j = 0; j < g.size(); ++j) d(0, j) = fn(g.position(j)[0]);
  return d;
}

// max_j |m_j - oracle_j| / max oracle, with oracle = exp(-phi) normalised.
double profile_error(const StationaryDensity& d, auto&& phi) {
  const GridSpec& g = d.m.grid();
  ScalarField o(g);
  for (std::size_t j = 0; j < g.size(); ++j) o[j] = std::exp(-phi(g.position(j)[0]));
  const double s = integrate(d.m) / integrate(o);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(d.m[j] - s * o[j]));
  return err / (s * o.max());
}

}  // namespace

TEST(Stationary, ZeroDriftIsUniform) {
  const ProblemSpec s = spec_on(GridSpec(1, 4.0, 65));
  const StationaryDensity d = solve_stationary(s, VectorField(s.grid));
  for (std::size_t j = 0; j < d.m.size(); ++j) EXPECT_NEAR(d.m[j], 1.0 / 8.0, 1e-15);
  EXPECT_LT(d.mass_error, 1e-15);
  EXPECT_NEAR(kinetic_energy(s, d), 0.0, 1e-15);
}

TEST(Stationary, GibbsProfileSecondOrder) {
  double err[3];
  int k = 0;
  for (int n : {129, 257, 513}) {
    const ProblemSpec s = spec_on(GridSpec(1, 8.0, n));
    const StationaryDensity d = solve_stationary(s, drift_of(s.grid, [](double x) { return -x; }));
    err[k++] = profile_error(d, [](double x) { return 0.5 * x * x; });
    EXPECT_GE(d.positivity_margin, 0.0);
  }
  EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.15);
  EXPECT_NEAR(std::log2(err[1] / err[2]), 2.0, 0.15);
}

TEST(Stationary, IntegratingFactorGeneralGamma) {
  // gamma = 3, u = x^2/2: drift -x|x|, m ~ exp(-|x|^3 / (3 eps)).
  const double eps = 0.8;
  double err[2];
  int k = 0;
  for (int n : {257, 513}) {
    const ProblemSpec s = spec_on(GridSpec(1, 5.0, n), eps, 3.0);
    const StationaryDensity d = solve_stationary(s, drift_of(s.grid, [](double x) { return -x * std::abs(x); }));
    err[k++] = profile_error(d, [eps](double x) { return std::pow(std::abs(x), 3) / (3.0 * eps); });
  }
  EXPECT_LT(err[1], 1e-4);
  EXPECT_GT(err[0] / err[1], 3.5);
}

TEST(Stationary, MatchesDenseNullVector) {
  const ProblemSpec s = spec_on(GridSpec(2, 2.0, 17), 0.6);
  VectorField drift(s.grid);
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    const Point x = s.grid.position(j);
    drift(0, j) = -x[0] + 0.5 * x[1];
    drift(1, j) = -1.5 * x[1] - 0.3 * x[0];
  }
  const StationaryDensity d = solve_stationary(s, drift);
  const Eigen::MatrixXd Gt = Eigen::MatrixXd(d.policy->generator()).transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Gt);
  ASSERT_EQ(lu.dimensionOfKernel(), 1);
  Eigen::VectorXd mu = lu.kernel().col(0);
  mu /= mu.sum();
  const auto W = trapezoid_weights(s.grid);
  double total = 0.0;
  for (std::size_t j = 0; j < W.size(); ++j) total += W[j] * d.m[j];
  for (std::size_t j = 0; j < W.size(); ++j)
    EXPECT_NEAR(W[j] * d.m[j] / total, mu[static_cast<Eigen::Index>(j)], 1e-12);
  EXPECT_LT(d.mass_error, 1e-14);
}

TEST(Stationary, MassConservationAndPositivity) {
  ProblemSpec s = spec_on(GridSpec(1, 8.0, 257), 0.3);
  s.mass = 2.5;
  const StationaryDensity d = solve_stationary(s, drift_of(s.grid, [](double x) { return -3.0 * std::tanh(x - 1.0); }));
  EXPECT_NEAR(integrate(d.m), 2.5, 1e-13);
  EXPECT_GE(d.m.min(), 0.0);
  EXPECT_LT(d.residual, 1e-12 * s.epsilon / (s.grid.h() * s.grid.h()));
}

TEST(Stationary, GibbsKineticIsHalfMassEpsilon) {
  for (double eps : {1.0, 0.5}) {
    const ProblemSpec s = spec_on(GridSpec(1, 8.0, 1025), eps);
    const StationaryDensity d = solve_stationary(s, drift_of(s.grid, [](double x) { return -x; }));
    EXPECT_NEAR(kinetic_energy(s, d), 0.5 * s.mass * eps, 1e-4);
    EXPECT_NEAR(normalized_kinetic(s, d), 2.0 * kinetic_energy(s, d) / (eps * eps), 1e-14);
  }
}
