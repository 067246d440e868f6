#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mfglab/choquard.hpp"
#include "mfglab/problem.hpp"
#include "mfglab/sweep.hpp"

namespace mfglab {

struct RunConfig {
  ProblemSpec problem;
  std::vector<double> ladder = geometric_ladder(1.0, 7);
  SweepOptions sweep;
  ChoquardOptions choquard;
  double subadditivity_eps = 0.125;
  double subadditivity_fraction = 0.5;
  std::uint64_t seed = 0;
  int random_fields = 20;
  int convexity_pairs = 100;
  bool smoke_2d = true;
  bool write_fields = true;
  // Directory of a previous `solve` run, read by `rescale`.
  std::string source;
};

// Strict key = value parser: one pair per line, '#' starts a comment,
// unknown or repeated keys and malformed values raise ConfigError naming
// the line. The resulting problem is validated.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Accepted keys with their defaults, one "key = default  # meaning" per line.
std::string config_reference();

}  // namespace mfglab
