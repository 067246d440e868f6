#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>

#include "mfglab/error.hpp"
#include "mfglab/field_io.hpp"
#include "mfglab/grid.hpp"

using namespace mfglab;

namespace {

ScalarField sample(const GridSpec& g, auto&& fn) {
  ScalarField f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = fn(g.position(j));
  return f;
}

}  // namespace

TEST(Grid, SpacingAndPositions) {
  const GridSpec g(1, 8.0, 17);
  EXPECT_DOUBLE_EQ(g.h(), 1.0);
  EXPECT_EQ(g.size(), 17u);
  EXPECT_DOUBLE_EQ(g.position(0)[0], -8.0);
  EXPECT_DOUBLE_EQ(g.position(16)[0], 8.0);
  EXPECT_EQ(g.center_node(), 8u);
  const GridSpec g2(2, Point{1.0, 2.0}, 17);
  EXPECT_EQ(g2.size(), 289u);
  EXPECT_DOUBLE_EQ(g2.spacing(1), 0.25);
  EXPECT_TRUE(g2.on_boundary(0, 0));
  EXPECT_FALSE(g2.on_boundary(g2.center_node(), 1));
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(GridSpec(3, 1.0, 17), DomainError);
  EXPECT_THROW(GridSpec(1, -1.0, 17), DomainError);
  EXPECT_THROW(GridSpec(1, 1.0, 8), DomainError);
}

TEST(Integrate, ZeroAndConstant) {
  const GridSpec g(1, 4.0, 33);
  EXPECT_EQ(integrate(ScalarField(g)), 0.0);
  EXPECT_DOUBLE_EQ(integrate(ScalarField(g, 1.0)), 8.0);
  const GridSpec g2(2, 1.5, 21);
  EXPECT_NEAR(integrate(ScalarField(g2, 1.0)), 9.0, 1e-13);
}

TEST(Integrate, ExponentialAgainstAntiderivative) {
  // The kink at 0 limits the trapezoid rule to its leading Euler-Maclaurin
  // term, (h^2/12) sum [f'] = (h^2/6)(1 - e^{-10}).
  const double exact = 2.0 * (1.0 - std::exp(-10.0));
  for (int n : {2049, 8193}) {
    const GridSpec g(1, 10.0, n);
    const ScalarField f = sample(g, [](Point x) { return std::exp(-std::abs(x[0])); });
    const double err = integrate(f) - exact;
    EXPECT_NEAR(err, g.h() * g.h() / 6.0 * (1.0 - std::exp(-10.0)), 1e-3 * err);
  }
  const GridSpec fine(1, 10.0, 8193);
  EXPECT_LT(std::abs(integrate(sample(fine, [](Point x) { return std::exp(-std::abs(x[0])); })) - exact), 1e-6);
}

TEST(Gradient, ConstantAndLinear) {
  const GridSpec g(1, 2.0, 41);
  const VectorField z = gradient_upwind(ScalarField(g, 3.0), UpwindBias::central);
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(z(0, j), 0.0);
  const ScalarField lin = sample(g, [](Point x) { return x[0]; });
  for (auto b : {UpwindBias::backward, UpwindBias::forward, UpwindBias::central, UpwindBias::monotone_hjb}) {
    const VectorField d = gradient_upwind(lin, b);
    for (std::size_t j = 1; j + 1 < g.size(); ++j) EXPECT_NEAR(d(0, j), 1.0, 1e-13);
  }
}

TEST(Gradient, HandEvaluatedStencilAtOne) {
  const GridSpec g(1, 2.0, 41);  // h = 0.1, node 30 is x = 1
  const ScalarField q = sample(g, [](Point x) { return x[0] * x[0]; });
  EXPECT_NEAR(gradient_upwind(q, UpwindBias::forward)(0, 30), 2.1, 1e-12);
  EXPECT_NEAR(gradient_upwind(q, UpwindBias::backward)(0, 30), 1.9, 1e-12);
  EXPECT_NEAR(gradient_upwind(q, UpwindBias::central)(0, 30), 2.0, 1e-12);
}

TEST(Gradient, MonotoneFieldHasSingleSign) {
  const GridSpec g(1, 3.0, 61);
  const ScalarField f = sample(g, [](Point x) { return std::tanh(x[0]) + 0.1 * x[0]; });
  const VectorField d = gradient_upwind(f, UpwindBias::monotone_hjb);
  for (std::size_t j = 1; j + 1 < g.size(); ++j) EXPECT_GT(d(0, j), 0.0);
}

TEST(Laplacian, ConstantQuadraticAndSine) {
  const GridSpec g(1, 2.0, 41);
  const ScalarField zero = laplacian(ScalarField(g, 5.0));
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(zero[j], 0.0);
  const ScalarField two = laplacian(sample(g, [](Point x) { return x[0] * x[0]; }));
  for (std::size_t j = 1; j + 1 < g.size(); ++j) EXPECT_NEAR(two[j], 2.0, 1e-12);

  const GridSpec s(1, std::numbers::pi, 257);
  const ScalarField lap = laplacian(sample(s, [](Point x) { return std::sin(x[0]); }));
  double err = 0.0;
  for (std::size_t j = 1; j + 1 < s.size(); ++j) err = std::max(err, std::abs(lap[j] + std::sin(s.position(j)[0])));
  EXPECT_LT(err, 1e-3);
}

TEST(Laplacian, TwoDimensionalQuadratic) {
  const GridSpec g(2, 1.0, 21);
  const ScalarField lap = laplacian(sample(g, [](Point x) { return x[0] * x[0] + 3.0 * x[1] * x[1]; }));
  for (std::size_t j = 0; j < g.size(); ++j)
    if (!g.on_boundary(j, 0) && !g.on_boundary(j, 1)) EXPECT_NEAR(lap[j], 8.0, 1e-11);
}

TEST(Divergence, OfConstantFieldVanishes) {
  const GridSpec g(2, 1.0, 17);
  VectorField w(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    w(0, j) = 2.0;
    w(1, j) = -1.0;
  }
  const ScalarField d = divergence(w);
  for (std::size_t j = 0; j < g.size(); ++j)
    if (!g.on_boundary(j, 0) && !g.on_boundary(j, 1)) EXPECT_NEAR(d[j], 0.0, 1e-14);
}

TEST(LpNorm, MatchesClosedForm) {
  const GridSpec g(1, 1.0, 2001);
  EXPECT_NEAR(lp_norm(ScalarField(g, 2.0), 3.0), 2.0 * std::cbrt(2.0), 1e-12);
}

TEST(Interpolation, ExactOnNodesAndCubics) {
  const GridSpec g(1, 2.0, 41);
  const ScalarField f = sample(g, [](Point x) { return 1.0 - x[0] + 0.5 * x[0] * x[0] * x[0]; });
  EXPECT_DOUBLE_EQ(interpolate_cubic(f, {0.5, 0.0}), f[25]);
  EXPECT_NEAR(interpolate_cubic(f, {0.537, 0.0}), 1.0 - 0.537 + 0.5 * std::pow(0.537, 3), 1e-12);
}

TEST(ShiftNodes, MovesValuesAndPadsEdges) {
  const GridSpec g(1, 8.0, 17);
  const ScalarField f = sample(g, [](Point x) { return x[0]; });
  const ScalarField s = shift_nodes(f, {2, 0});
  EXPECT_DOUBLE_EQ(s[0], f[2]);
  EXPECT_DOUBLE_EQ(s[4], f[6]);
  EXPECT_DOUBLE_EQ(s[16], f[16]);
  EXPECT_DOUBLE_EQ(s[15], f[16]);
}

TEST(BoundaryRatio, DetectsEdgeMass) {
  const GridSpec g(1, 4.0, 17);
  EXPECT_DOUBLE_EQ(boundary_ratio(ScalarField(g, 1.0)), 1.0);
  const ScalarField f = sample(g, [](Point x) { return std::exp(-x[0] * x[0]); });
  EXPECT_NEAR(boundary_ratio(f), std::exp(-16.0), 1e-20);
}

TEST(FieldIo, RoundTripIsBitExact) {
  const GridSpec g(2, Point{1.5, 2.5}, 17);
  const ScalarField f = sample(g, [](Point x) { return std::exp(x[0]) * std::sin(3.0 * x[1]) / 7.0; });
  const auto dir = std::filesystem::temp_directory_path() / "mfglab_test_io";
  std::filesystem::create_directories(dir);
  write_field(dir / "f", f, "density");
  const StoredField back = read_field(dir / "f");
  EXPECT_EQ(back.quantity, "density");
  ASSERT_TRUE(back.field.grid() == g);
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(std::bit_cast<std::uint64_t>(back.field[j]), std::bit_cast<std::uint64_t>(f[j]));
  EXPECT_EQ(std::filesystem::file_size(dir / "f.f64"), g.size() * sizeof(double));
  std::filesystem::remove_all(dir);
}
