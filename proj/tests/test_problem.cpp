#include <gtest/gtest.h>

#include <cmath>

#include "mfglab/config.hpp"
#include "mfglab/error.hpp"
#include "mfglab/problem.hpp"

using namespace mfglab;

TEST(ProblemSpec, DefaultsAreValid) {
  ProblemSpec s;
  EXPECT_NO_THROW(s.validate());
  EXPECT_DOUBLE_EQ(s.gamma_conj(), 2.0);
}

TEST(ProblemSpec, RejectsOutsideSubcriticalRange) {
  ProblemSpec s;
  s.alpha = 1.5;
  EXPECT_THROW(s.validate(), DomainError);
  s.alpha = 0.5;
  s.gamma = 1.0;
  EXPECT_THROW(s.validate(), DomainError);
  s.gamma = 3.0;  // N - gamma' = -0.5
  s.alpha = 0.1;
  EXPECT_NO_THROW(s.validate());
  s.dim = 2;
  EXPECT_THROW(s.validate(), DomainError);  // grid is 1D
}

TEST(Potential, PowerShiftedAndWells) {
  PotentialSpec v;
  v.center = {0.3, 0.0};
  EXPECT_NEAR(v({1.3, 0.0}, 1), 1.0, 1e-15);
  v.kind = PotentialKind::shifted_power;
  v.r0 = 0.5;
  EXPECT_EQ(v({0.5, 0.0}, 1), 0.0);
  EXPECT_NEAR(v({1.8, 0.0}, 1), 1.0, 1e-15);
  PotentialSpec w;
  w.kind = PotentialKind::multi_well;
  w.wells = {{{-1.0, 0.0}, 2.0}, {{1.0, 0.0}, 4.0}};
  EXPECT_NEAR(w({0.0, 0.0}, 1), 1.0, 1e-15);
  EXPECT_EQ(w({1.0, 0.0}, 1), 0.0);
  EXPECT_EQ(w.minimizers(1).size(), 2u);
  EXPECT_DOUBLE_EQ(w.growth(), 6.0);
}

TEST(Potential, FrameScalesCompose) {
  PotentialSpec v;
  v.center = {0.0, 0.0};
  v.value_scale = 0.5;
  v.coord_scale = 2.0;
  v.shift = {1.0, 0.0};
  // 0.5 * |2 (x + 1)|^2 at x = 0.5
  EXPECT_NEAR(v({0.5, 0.0}, 1), 4.5, 1e-14);
}

TEST(Potential, ComparabilityConstantSatisfiesBounds) {
  PotentialSpec v;
  const double C = minimal_comparability_constant(v, 1);
  EXPECT_GT(C, 0.0);
  for (double x = -50.0; x <= 50.0; x += 0.37) {
    const double val = v({x, 0.0}, 1);
    EXPECT_LE(val, C * std::pow(1.0 + std::abs(x), v.b) * (1.0 + 1e-12));
    EXPECT_GE(val * (1.0 + 1e-12), std::pow(std::max(std::abs(x) - C, 0.0), v.b) / C);
  }
  ProblemSpec s;
  s.potential.C_V = 0.5 * C;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(Config, EmptyDocumentGivesDefaults) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.problem.dim, 1);
  EXPECT_EQ(c.ladder.size(), 7u);
  EXPECT_DOUBLE_EQ(c.ladder.back(), 1.0 / 64.0);
}

TEST(Config, ParsesValidDocument) {
  const RunConfig c = parse_config("gamma = 2\nalpha = 0.5  # comment\ndim = 1\n\nwells = -1:2; 1:4\npotential = multi_well\n");
  EXPECT_DOUBLE_EQ(c.problem.alpha, 0.5);
  EXPECT_EQ(c.problem.potential.kind, PotentialKind::multi_well);
  ASSERT_EQ(c.problem.potential.wells.size(), 2u);
  EXPECT_DOUBLE_EQ(c.problem.potential.wells[1].b, 4.0);
}

TEST(Config, RejectsInvalidAlpha) { EXPECT_ANY_THROW(parse_config("alpha = 1.5\n")); }

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ErrorsNameTheLine) {
  EXPECT_NE(config_error("gamma = 2\nfoo = 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(config_error("gamma = 2\n\ngamma = 3\n").find("line 3"), std::string::npos);
  EXPECT_NE(config_error("alpha = abc\n").find("line 1"), std::string::npos);
  EXPECT_NE(config_error("points\n").find("line 1"), std::string::npos);
  EXPECT_FALSE(config_error("ladder = 1, 0.5\nrungs = 3\n").empty());
}

TEST(Config, ReferenceListsEveryKey) {
  const std::string ref = config_reference();
  for (const char* key : {"gamma", "alpha", "half_width", "points", "ladder", "damping", "seed", "source"})
    EXPECT_NE(ref.find(std::string(key) + " = "), std::string::npos) << key;
  EXPECT_NO_THROW(parse_config("points = 769\nhalf_width = 12\n"));
}
