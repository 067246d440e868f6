#pragma once

#include <string>
#include <vector>

#include "mfglab/config.hpp"
#include "mfglab/report.hpp"
#include "mfglab/sweep.hpp"

namespace mfglab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  std::vector<SweepRecord> records;
  CsvTable solves = solve_table();
  Summary summary;

  bool all_passed() const;
};

// Runs acceptance criteria 1-9 on the configuration: reference solves,
// cross-solver oracle, analytic oracles, the epsilon sweep, the
// sub-additivity probe, conservation and property batteries, and the 2D
// smoke case when enabled.
AcceptanceReport run_acceptance(const RunConfig& cfg);

// "[PASS] 1 duality identity: detail"
std::string format_criterion(const CriterionResult& c);

}  // namespace mfglab
