#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mfglab/commands.hpp"
#include "mfglab/config.hpp"

using namespace mfglab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mfglab_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Cli, CommandNames) {
  for (auto c : {Command::solve, Command::sweep, Command::choquard, Command::rescale, Command::verify})
    EXPECT_EQ(parse_command(command_name(c)), c);
  EXPECT_FALSE(parse_command("nope"));
}

TEST(Cli, InvalidGammaIsAConfigError) {
  RunConfig cfg = parse_config("");
  cfg.problem.gamma = 1.0;
  std::ostringstream log;
  EXPECT_EQ(run_command(Command::solve, cfg, scratch("gamma"), log), kExitConfig);
}

TEST(Cli, ChoquardNeedsQuadraticHamiltonian) {
  RunConfig cfg = parse_config("gamma = 3\nalpha = 0.7\n");
  std::ostringstream log;
  EXPECT_EQ(run_command(Command::choquard, cfg, scratch("chq"), log), kExitConfig);
}

TEST(Cli, SolveIsDeterministic) {
  const RunConfig cfg = parse_config("half_width = 8\npoints = 513\n");
  const fs::path a = scratch("solve_a"), b = scratch("solve_b");
  std::ostringstream log;
  ASSERT_EQ(run_command(Command::solve, cfg, a, log), kExitOk) << log.str();
  ASSERT_EQ(run_command(Command::solve, cfg, b, log), kExitOk) << log.str();
  for (const char* f : {"diagnostics.csv", "trace.csv", "summary.txt", "m.f64", "u.f64"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(Cli, RescaleReadsPreviousSolve) {
  RunConfig cfg = parse_config("half_width = 8\npoints = 513\n");
  const fs::path src = scratch("rs_src"), out = scratch("rs_out");
  std::ostringstream log;
  ASSERT_EQ(run_command(Command::solve, cfg, src, log), kExitOk);
  cfg.source = src.string();
  EXPECT_EQ(run_command(Command::rescale, cfg, out, log), kExitOk) << log.str();
  EXPECT_TRUE(fs::exists(out / "summary.txt"));
}

TEST(Cli, SweepWritesOneRowPerRung) {
  const RunConfig cfg = parse_config("ladder = 1, 0.5, 0.25\nwrite_fields = false\n");
  const fs::path out = scratch("sweep");
  std::ostringstream log;
  run_command(Command::sweep, cfg, out, log);
  const std::string csv = slurp(out / "diagnostics.csv");
  EXPECT_EQ(lines(csv), 4) << csv;  // header + 3 rungs
}

TEST(Cli, VerifyPassesOnDefaults) {
  const RunConfig cfg = parse_config("");
  const fs::path out = scratch("verify");
  std::ostringstream log;
  EXPECT_EQ(run_command(Command::verify, cfg, out, log), kExitOk) << log.str();
  int pass = 0;
  std::istringstream in(log.str());
  for (std::string l; std::getline(in, l);) pass += l.rfind("PASS", 0) == 0 || l.find("PASS") != std::string::npos;
  EXPECT_GE(pass, 9);
  EXPECT_TRUE(fs::exists(out / "solves.csv"));
}
