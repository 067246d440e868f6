#include "mfglab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mfglab/error.hpp"

namespace mfglab {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) throw Error("CSV row has the wrong number of cells");
  rows_.push_back(cells);
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

CsvTable solve_table() {
  return CsvTable({"solver", "epsilon", "lambda", "energy_total", "kinetic", "potential", "interaction",
                   "linearized_energy", "duality_residual", "hjb_residual", "fp_residual", "mass_error", "min_m",
                   "outer_iterations"});
}

void add_solve_row(CsvTable& t, const std::string& solver, const MFGSolution& s) {
  t.add_row({solver, format_real(s.epsilon), format_real(s.lambda), format_real(s.energy.total),
             format_real(s.energy.kinetic), format_real(s.energy.potential), format_real(s.energy.interaction),
             format_real(s.linearized_energy), format_real(s.duality_residual), format_real(s.hjb_residual),
             format_real(s.fp_residual), format_real(s.mass_error), format_real(s.m.min()),
             std::to_string(s.outer_iterations)});
}

CsvTable sweep_table(const std::vector<SweepRecord>& records) {
  std::vector<std::string> cols = {"epsilon",     "lambda",      "lambda_rescaled", "energy_total",
                                   "energy_rescaled", "kinetic", "potential",       "interaction",
                                   "x_eps_0",     "x_eps_1",     "mass_in_ball",    "y_eps_scaled",
                                   "sup_m_rescaled", "tail_slope", "tail_r2",       "outer_iterations"};
  std::vector<std::string> ledger;
  if (!records.empty())
    for (const auto& kv : records.front().ledger_ratios) ledger.push_back(kv.first);
  cols.insert(cols.end(), ledger.begin(), ledger.end());
  CsvTable t(cols);
  for (const auto& r : records) {
    std::vector<std::string> row = {format_real(r.epsilon),
                                    format_real(r.lambda),
                                    format_real(r.lambda_rescaled),
                                    format_real(r.energy_total),
                                    format_real(r.energy_rescaled),
                                    format_real(r.energy_parts.kinetic),
                                    format_real(r.energy_parts.potential),
                                    format_real(r.energy_parts.interaction),
                                    format_real(r.concentration_point[0]),
                                    format_real(r.concentration_point[1]),
                                    format_real(r.mass_in_ball),
                                    format_real(r.y_eps_scaled),
                                    format_real(r.sup_m_rescaled),
                                    format_real(r.tail_slope),
                                    format_real(r.tail_r2),
                                    std::to_string(r.outer_iterations)};
    for (const auto& k : ledger) {
      const auto it = r.ledger_ratios.find(k);
      row.push_back(format_real(it == r.ledger_ratios.end() ? 0.0 : it->second));
    }
    t.add_row(row);
  }
  return t;
}

std::string Summary::str() const {
  std::ostringstream out;
  for (const auto& [k, v] : lines_) out << k << " = " << v << "\n";
  return out.str();
}

void Summary::write(const std::filesystem::path& path) const { write_text(path, str()); }

}  // namespace mfglab
