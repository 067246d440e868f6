#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mfglab/error.hpp"
#include "mfglab/hjb.hpp"

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

ScalarField sample(const GridSpec& g, auto&& fn) {
  ScalarField f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = fn(g.position(j)[0]);
  return f;
}

}  // namespace

TEST(Ergodic, ConstantForcing) {
  const ProblemSpec s = spec_on(GridSpec(1, 4.0, 65));
  const ErgodicSolution e = solve_ergodic(s, ScalarField(s.grid, 2.5));
  EXPECT_NEAR(e.lambda, 2.5, 1e-13);
  EXPECT_LT(e.u.max(), 1e-12);
  EXPECT_EQ(e.u.min(), 0.0);
}

TEST(Ergodic, ShiftCovariance) {
  const ProblemSpec s = spec_on(GridSpec(1, 6.0, 193), 0.8);
  const ScalarField f = sample(s.grid, [](double x) { return x * x + std::sin(2.0 * x); });
  ScalarField fc = f;
  for (auto& v : fc.values()) v += 3.25;
  const ErgodicSolution a = solve_ergodic(s, f), b = solve_ergodic(s, fc);
  EXPECT_NEAR(b.lambda - a.lambda, 3.25, 1e-11);
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_NEAR(a.u[j], b.u[j], 1e-10 * (1.0 + a.u.max()));
}

TEST(Ergodic, HarmonicOscillatorSecondOrder) {
  double err[3];
  int k = 0;
  for (int n : {129, 257, 513}) {
    const ProblemSpec s = spec_on(GridSpec(1, 8.0, n));
    const ErgodicSolution e = solve_ergodic(s, sample(s.grid, [](double x) { return x * x; }));
    err[k++] = std::abs(e.lambda - std::sqrt(2.0));
  }
  EXPECT_LT(err[2], 1e-4);
  EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.1);
  EXPECT_NEAR(std::log2(err[1] / err[2]), 2.0, 0.1);
}

TEST(Ergodic, DiscreteHopfColeEigenproblem) {
  // At gamma = 2, v = exp(-u / (2 eps)) solves (-2 eps^2 L + diag f) v = lambda v
  // with L the mirror-reflected Neumann Laplacian. W L is symmetric for
  // trapezoid weights W, so the ground state comes from a symmetric problem.
  const double eps = 0.7;
  const GridSpec g(1, 6.0, 97);
  const ProblemSpec s = spec_on(g, eps);
  const ScalarField f = sample(g, [](double x) { return x * x + 0.5 * std::sin(3.0 * x); });
  const int n = static_cast<int>(g.size());
  const double h = g.h(), rho = 2.0 * eps * eps / (h * h);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int p = j == n - 1 ? j - 1 : j + 1, m = j == 0 ? 1 : j - 1;
    A(j, j) += 2.0 * rho + f[j];
    A(j, p) -= rho;
    A(j, m) -= rho;
  }
  const auto W = trapezoid_weights(g);
  Eigen::VectorXd sw(n);
  for (int j = 0; j < n; ++j) sw[j] = std::sqrt(W[j]);
  const Eigen::MatrixXd S = sw.asDiagonal() * A * sw.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  const double lam = es.eigenvalues()[0];
  Eigen::VectorXd v = sw.cwiseInverse().asDiagonal() * es.eigenvectors().col(0);
  if (v.sum() < 0) v = -v;

  const ErgodicSolution e = solve_ergodic(s, f);
  EXPECT_NEAR(e.lambda, lam, 1e-10 * std::abs(lam));
  const double vmax = v.maxCoeff();
  for (int j = 0; j < n; ++j) EXPECT_NEAR(e.u[j], -2.0 * eps * std::log(v[j] / vmax), 1e-9 * (1.0 + e.u[j]));
}

TEST(Ergodic, GeneralGammaResidual) {
  const ProblemSpec s = spec_on(GridSpec(1, 6.0, 193), 1.0, 3.0);
  const ScalarField f = sample(s.grid, [](double x) { return std::abs(x) * std::abs(x) * std::abs(x) / 3.0; });
  const ErgodicSolution e = solve_ergodic(s, f);
  EXPECT_LE(e.residual, 1e-11 * (1.0 + f.max()));
  EXPECT_NEAR(hjb_residual(s, e.u, e.lambda, f), e.residual, 1e-9);
  EXPECT_GT(e.lambda, 0.0);
}

TEST(Ergodic, IterationCapRaises) {
  const ProblemSpec s = spec_on(GridSpec(1, 6.0, 193));
  HjbOptions o;
  o.max_iters = 1;
  o.tol = 1e-15;
  EXPECT_THROW(solve_ergodic(s, sample(s.grid, [](double x) { return x * x; }), o), ConvergenceError);
}

TEST(Ergodic, RejectsBadForcing) {
  const ProblemSpec s = spec_on(GridSpec(1, 6.0, 193));
  ScalarField f(s.grid, 1.0);
  f[3] = std::nan("");
  EXPECT_THROW(solve_ergodic(s, f), DomainError);
  EXPECT_THROW(solve_ergodic(s, ScalarField(GridSpec(1, 6.0, 65), 1.0)), DomainError);
}

TEST(OptimalDrift, ConstantLinearAndPowerLaw) {
  const GridSpec g(1, 4.0, 801);  // h = 0.01
  const ScalarField lin = sample(g, [](double x) { return 2.0 * x; });
  const std::size_t mid = g.center_node();
  const VectorField z = optimal_drift(spec_on(g), ScalarField(g, 1.0));
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(z(0, j), 0.0);
  // gamma = 2: -grad u up to the O(h^2) sinh factor of the jump rates.
  EXPECT_NEAR(optimal_drift(spec_on(g), lin)(0, mid), -2.0, 1e-4);
  // gamma = 3: -grad u |grad u| = -4.
  EXPECT_NEAR(optimal_drift(spec_on(g, 1.0, 3.0), lin)(0, mid), -4.0, 1e-9);
  // gamma = 1.5: -|2|^{1/2}
  ProblemSpec s15 = spec_on(g, 1.0, 1.5);
  s15.alpha = 0.9;
  EXPECT_NEAR(optimal_drift(s15, lin)(0, mid), -std::sqrt(2.0), 1e-9);
}
