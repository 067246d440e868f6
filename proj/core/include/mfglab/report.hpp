#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mfglab/mfg.hpp"
#include "mfglab/sweep.hpp"

namespace mfglab {

// Fixed-column CSV; reals are written with 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void add_row(const std::vector<std::string>& cells);
  void write(const std::filesystem::path& path) const;
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_real(double v);

// One row per solve: solver tag, epsilon, lambda, energy parts, residuals.
CsvTable solve_table();
void add_solve_row(CsvTable& t, const std::string& solver, const MFGSolution& sol);

// One row per rung; ledger ratios follow in key order.
CsvTable sweep_table(const std::vector<SweepRecord>& records);

// "key = value" lines.
class Summary {
 public:
  void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, format_real(value)); }
  void write(const std::filesystem::path& path) const;
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

}  // namespace mfglab
