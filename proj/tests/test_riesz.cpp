#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mfglab/error.hpp"
#include "mfglab/riesz.hpp"

using namespace mfglab;

TEST(RieszKernel, CellAverageAtOffsetFour) {
  const GridSpec g(1, 8.0, 17);  // h = 1
  const RieszKernelTable K = tabulate_kernel(g, 0.5);
  // Average of |x|^{-1/2} over [3.5, 4.5] and the point value 4^{-1/2}.
  EXPECT_NEAR(K.value(4), 2.0 * (std::sqrt(4.5) - std::sqrt(3.5)), 1e-14);
  EXPECT_NEAR(K.value(4), 0.5, 2e-3);
  EXPECT_DOUBLE_EQ(K.value(-4), K.value(4));
}

TEST(RieszKernel, OriginCellClosedForm1D) {
  const GridSpec g(1, 1.6, 33);  // h = 0.1
  const RieszKernelTable K = tabulate_kernel(g, 0.5);
  // (1/h) int_{-h/2}^{h/2} |y|^{-1/2} dy = 4 sqrt(h/2) / h
  EXPECT_NEAR(K.origin_value(), 4.0 * std::sqrt(0.05) / 0.1, 1e-12);
  EXPECT_GT(K.origin_value(), K.value(1));
}

TEST(RieszKernel, OriginCell2DMatchesPolarQuadrature) {
  const double h = 0.25;
  // Independent oracle: midpoint rule in polar coordinates over the square
  // [-h/2, h/2]^2, where int |x|^{-1} dA = int_0^{2pi} R(t) dt.
  const int n = 200000;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.5) / n;
    s += 0.5 * h / std::max(std::abs(std::cos(t)), std::abs(std::sin(t)));
  }
  const double oracle = s * 2.0 * std::numbers::pi / n / (h * h);
  EXPECT_NEAR(riesz_cell_average_2d(0, 0, h, h, 1.0), oracle, 1e-9 * oracle);
  EXPECT_GT(riesz_cell_average_2d(0, 0, h, h, 1.0), riesz_cell_average_2d(1, 0, h, h, 1.0));
  EXPECT_NEAR(riesz_cell_average_2d(5, 3, h, h, 1.0), 1.0 / (h * std::hypot(5.0, 3.0)), 2e-3 / h);
}

TEST(RieszKernel, RejectsOutOfRangeAlpha) {
  const GridSpec g(1, 2.0, 17);
  EXPECT_THROW(tabulate_kernel(g, 1.0), DomainError);
  EXPECT_THROW(tabulate_kernel(g, 0.0), DomainError);
}

TEST(Convolve, ZeroAndPointMass) {
  const GridSpec g(1, 4.0, 81);
  const RieszKernelTable K = tabulate_kernel(g, 0.5);
  const ScalarField z = convolve(K, ScalarField(g));
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(z[j], 0.0);
  ScalarField delta(g);
  delta[g.center_node()] = 1.0 / g.h();
  const ScalarField k = convolve(K, delta);
  for (int off : {3, 10, 40}) EXPECT_NEAR(k[g.center_node() + off], K.value(off), 1e-14 * K.value(off));
}

TEST(Convolve, IndicatorOfUnitInterval) {
  const GridSpec g(1, 2.0, 4001);  // h = 1e-3
  ScalarField ind(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = std::abs(g.position(j)[0]);
    ind[j] = x < 0.5 - 1e-9 ? 1.0 : (x < 0.5 + 1e-9 ? 0.5 : 0.0);
  }
  const ScalarField c = convolve(tabulate_kernel(g, 0.5), ind);
  // int_{-1/2}^{1/2} |y|^{-1/2} dy = 2 * 2 sqrt(1/2) = 2 sqrt 2
  EXPECT_NEAR(c[g.center_node()], 2.0 * std::sqrt(2.0), 1e-4);
}

TEST(Convolve, LinearAndReflectionSymmetric) {
  const GridSpec g(1, 3.0, 61);
  const RieszKernelTable K = tabulate_kernel(g, 0.7);
  ScalarField a(g), b(g), ab(g), ra(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.position(j)[0];
    a[j] = std::exp(-(x - 0.4) * (x - 0.4));
    b[j] = 1.0 / (1.0 + x * x);
    ab[j] = 2.0 * a[j] - 3.0 * b[j];
    ra[g.size() - 1 - j] = a[j];
  }
  const ScalarField ca = convolve(K, a), cb = convolve(K, b), cab = convolve(K, ab), cra = convolve(K, ra);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_NEAR(cab[j], 2.0 * ca[j] - 3.0 * cb[j], 1e-12);
    EXPECT_NEAR(cra[g.size() - 1 - j], ca[j], 1e-12);
  }
}

TEST(InteractionEnergy, QuadraticPositiveAndDirectSum) {
  const GridSpec g(1, 6.0, 201);
  const RieszKernelTable K = tabulate_kernel(g, 0.5);
  const auto W = trapezoid_weights(g);
  ScalarField m(g), m2(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.position(j)[0];
    m[j] = std::exp(-x * x) / std::sqrt(std::numbers::pi);
    m2[j] = 2.0 * m[j];
  }
  EXPECT_EQ(interaction_energy(K, ScalarField(g)), 0.0);
  const double I = interaction_energy(K, m);
  EXPECT_GT(I, 0.0);
  EXPECT_NEAR(interaction_energy(K, m2), 4.0 * I, 1e-13 * I);
  // O(n^2) double sum with the same cell-averaged kernel.
  double direct = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      direct += W[i] * W[j] * m[i] * m[j] * K.value(static_cast<int>(i) - static_cast<int>(j));
  EXPECT_NEAR(I, direct, 1e-8 * direct);
}

TEST(InteractionEnergy, GaussianClosedForm1D) {
  // x - y ~ N(0, 1) for m = exp(-x^2)/sqrt(pi), so the energy is
  // E|Z|^{-1/2} = 2^{-1/4} Gamma(1/4) / sqrt(pi).
  const GridSpec g(1, 8.0, 2049);
  ScalarField m(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.position(j)[0];
    m[j] = std::exp(-x * x) / std::sqrt(std::numbers::pi);
  }
  const double exact = std::pow(2.0, -0.25) * std::tgamma(0.25) / std::sqrt(std::numbers::pi);
  EXPECT_NEAR(exact, 1.7200, 1e-4);
  EXPECT_NEAR(interaction_energy(tabulate_kernel(g, 0.5), m), exact, 1e-4);
}

TEST(InteractionEnergy, GaussianClosedForm2D) {
  // In 2D with alpha = 1 the value is E|Z|^{-1} = sqrt(pi / 2).
  const double exact = std::sqrt(std::numbers::pi / 2.0);
  double err[2];
  int k = 0;
  for (int n : {97, 193}) {
    const GridSpec g(2, 6.0, n);
    ScalarField m(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Point x = g.position(j);
      m[j] = std::exp(-(x[0] * x[0] + x[1] * x[1])) / std::numbers::pi;
    }
    err[k++] = std::abs(interaction_energy(tabulate_kernel(g, 1.0), m) - exact);
  }
  EXPECT_LT(err[1], 3e-4);
  EXPECT_GT(err[0] / err[1], 3.5);
}

TEST(InteractionEnergy, RejectsNegativeDensity) {
  const GridSpec g(1, 2.0, 17);
  ScalarField m(g, 1.0);
  m[3] = -1e-6;
  EXPECT_THROW(interaction_energy(tabulate_kernel(g, 0.5), m), DomainError);
}

TEST(KernelCache, ReturnsSharedTable) {
  const GridSpec g(1, 2.0, 33);
  EXPECT_EQ(cached_kernel(g, 0.5).get(), cached_kernel(g, 0.5).get());
  EXPECT_NE(cached_kernel(g, 0.5).get(), cached_kernel(g, 0.6).get());
}
