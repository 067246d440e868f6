#include "mfglab/commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "mfglab/choquard.hpp"
#include "mfglab/error.hpp"
#include "mfglab/field_io.hpp"
#include "mfglab/mfg.hpp"
#include "mfglab/report.hpp"
#include "mfglab/rescaling.hpp"
#include "mfglab/riesz.hpp"
#include "mfglab/verify.hpp"

namespace fs = std::filesystem;

namespace mfglab {

namespace {

struct Failures {
  std::vector<std::string> items;

  void check(bool ok, const std::string& name, const std::string& detail) {
    if (!ok) items.push_back(name + ": " + detail);
  }
  int finish(Summary& s, const fs::path& out, std::ostream& log) const {
    std::string joined;
    for (const auto& f : items) {
      log << "FAIL " << f << "\n";
      joined += (joined.empty() ? "" : "; ") + f;
    }
    s.add("status", items.empty() ? "pass" : "fail");
    s.add("failures", joined.empty() ? "none" : joined);
    s.write(out / "summary.txt");
    return items.empty() ? kExitOk : kExitFailed;
  }
};

void write_solution_fields(const fs::path& out, const MFGSolution& sol, const std::string& suffix) {
  write_field(out / ("u" + suffix), sol.u, "u");
  write_field(out / ("m" + suffix), sol.m, "m");
}

void warn_boundary(const ScalarField& m, const std::string& what, std::ostream& log) {
  const double r = boundary_ratio(m);
  if (r > 1e-10)
    log << "warning: " << what << " boundary density is " << format_real(r)
        << " of the maximum (above 1e-10); enlarge half_width\n";
}

void add_problem(Summary& s, const ProblemSpec& p) {
  s.add("dim", std::to_string(p.dim));
  s.add("gamma", p.gamma);
  s.add("alpha", p.alpha);
  s.add("mass", p.mass);
  s.add("epsilon", p.epsilon);
}

void write_trace(const fs::path& path, const std::vector<double>& trace) {
  CsvTable t({"iteration", "residual"});
  for (std::size_t k = 0; k < trace.size(); ++k) t.add_row({std::to_string(k + 1), format_real(trace[k])});
  t.write(path);
}

int cmd_solve(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  Summary s;
  add_problem(s, cfg.problem);
  Failures fail;
  try {
    const MFGSolution sol = solve_mfg(cfg.problem, std::nullopt, cfg.sweep.mfg);
    CsvTable t = solve_table();
    add_solve_row(t, "mfg", sol);
    t.write(out / "diagnostics.csv");
    write_trace(out / "trace.csv", sol.trace);
    if (cfg.write_fields) write_solution_fields(out, sol, "");
    s.add("lambda", sol.lambda);
    s.add("energy_total", sol.energy.total);
    s.add("duality_residual", sol.duality_residual);
    s.add("mass_error", sol.mass_error);
    s.add("outer_iterations", std::to_string(sol.outer_iterations));
    s.add("boundary_ratio", boundary_ratio(sol.m));
    warn_boundary(sol.m, "solve", log);
    log << "lambda = " << format_real(sol.lambda) << ", energy = " << format_real(sol.energy.total) << "\n";
  } catch (const MfgSolveError& e) {
    if (e.last_iterate()) {
      write_trace(out / "trace.csv", e.last_iterate()->trace);
      if (cfg.write_fields) write_solution_fields(out, *e.last_iterate(), "_last");
    }
    fail.check(false, "solve", e.what());
  } catch (const NumericalError& e) {
    fail.check(false, "solve", e.what());
  }
  return fail.finish(s, out, log);
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  Summary s;
  add_problem(s, cfg.problem);
  Failures fail;
  const SweepResult r = run_sweep(cfg.problem, cfg.ladder, cfg.sweep);
  sweep_table(r.records).write(out / "diagnostics.csv");
  if (cfg.write_fields)
    for (std::size_t k = 0; k < r.records.size(); ++k)
      write_solution_fields(out, *r.records[k].solution, "_rung" + std::to_string(k));
  s.add("rungs_completed", std::to_string(r.records.size()));
  fail.check(r.ok(), "sweep", r.failure);
  const double target = target_slope(cfg.problem);
  s.add("target_slope", target);
  for (auto [q, name] : {std::pair{FitQuantity::energy, "energy"}, std::pair{FitQuantity::lambda, "lambda"}}) {
    try {
      const ScalingFit f = fit_scaling_exponent(r.records, q, cfg.sweep.fit_eps_max);
      s.add(std::string(name) + "_slope", f.slope);
      s.add(std::string(name) + "_r2", f.r_squared);
      fail.check(std::abs(f.slope - target) <= 0.1 * std::abs(target) && f.r_squared >= 0.99,
                 std::string(name) + "_slope", format_real(f.slope) + " (r2 " + format_real(f.r_squared) + ")");
    } catch (const DomainError& e) {
      fail.check(false, std::string(name) + "_slope", e.what());
    }
  }
  for (const auto& rec : r.records) {
    warn_boundary(rec.solution->m, "rung epsilon = " + format_real(rec.epsilon), log);
    if (rec.epsilon <= 0.125)
      fail.check(rec.mass_in_ball >= cfg.problem.mass - cfg.sweep.eta, "mass_in_ball",
                 "epsilon " + format_real(rec.epsilon) + ": " + format_real(rec.mass_in_ball));
    fail.check(rec.tail_slope < 0.0 && rec.tail_r2 >= 0.95, "tail_decay",
               "epsilon " + format_real(rec.epsilon) + ": slope " + format_real(rec.tail_slope) + ", r2 " +
                   format_real(rec.tail_r2));
  }
  try {
    const ConcentrationReport c = concentration_report(r.records, cfg.problem);
    if (!c.suppressed) {
      s.add("limit_point_0", c.limit_point[0]);
      s.add("limit_point_1", c.limit_point[1]);
      s.add("v_at_limit", c.v_at_limit);
      fail.check(c.v_at_limit <= 1e-3, "concentration", "V(limit) = " + format_real(c.v_at_limit));
    }
  } catch (const Error& e) {
    fail.check(false, "concentration", e.what());
  }
  log << r.records.size() << " rungs written to " << (out / "diagnostics.csv").string() << "\n";
  return fail.finish(s, out, log);
}

int cmd_choquard(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  Summary s;
  add_problem(s, cfg.problem);
  Failures fail;
  try {
    const ChoquardState c = solve_choquard(cfg.problem, cfg.choquard);
    CsvTable t({"epsilon", "mu", "energy", "residual", "iterations"});
    t.add_row({format_real(cfg.problem.epsilon), format_real(c.mu), format_real(c.energy), format_real(c.residual),
               std::to_string(c.iterations)});
    t.write(out / "diagnostics.csv");
    if (cfg.write_fields) {
      write_field(out / "v", c.v, "v");
      write_field(out / "m", c.density(), "m");
    }
    s.add("mu", c.mu);
    s.add("energy", c.energy);
    s.add("residual", c.residual);
    s.add("iterations", std::to_string(c.iterations));
    log << "mu = " << format_real(c.mu) << ", energy = " << format_real(c.energy) << "\n";
  } catch (const ConvergenceError& e) {
    fail.check(false, "choquard", e.what());
  } catch (const NumericalError& e) {
    fail.check(false, "choquard", e.what());
  }
  return fail.finish(s, out, log);
}

double read_summary_value(const fs::path& path, const std::string& key) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos && line.substr(0, eq) == key) return std::stod(line.substr(eq + 3));
  }
  throw ConfigError(path.string() + " has no key " + key);
}

// Stored (or freshly solved) original-frame solution mapped to the rescaled
// frame on a grid whose nodes are the images of the original nodes, then
// mapped back. Mass, the round trip and the homogeneity of the potential
// and interaction parts are checked.
int cmd_rescale(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const ProblemSpec& p = cfg.problem;
  Summary s;
  add_problem(s, p);
  Failures fail;
  MFGSolution sol;
  if (!cfg.source.empty()) {
    const fs::path src(cfg.source);
    sol.u = read_field(src / "u").field;
    sol.m = read_field(src / "m").field;
    sol.w = VectorField(sol.m.grid());
    sol.lambda = read_summary_value(src / "summary.txt", "lambda");
    sol.epsilon = read_summary_value(src / "summary.txt", "epsilon");
    if (sol.m.grid() != p.grid) throw ConfigError("stored fields do not match the configured grid");
    if (sol.epsilon != p.epsilon) throw ConfigError("stored fields were solved at another epsilon");
    s.add("source", cfg.source);
  } else {
    sol = solve_mfg(p, std::nullopt, cfg.sweep.mfg);
  }
  sol.energy = evaluate_energy(p, FlowPair{sol.m, sol.w, nullptr});

  const ScaleExponents e = exponents(p);
  const double cs = std::pow(p.epsilon, e.space);
  Point hw{0.0, 0.0};
  for (int a = 0; a < p.dim; ++a) hw[a] = p.grid.half_width(a) / cs;
  const GridSpec rg(p.dim, hw, p.grid.points());
  const MFGSolution r = rescale_solution(p, sol, rg);
  const MFGSolution back = unrescale_solution(p, r, p.grid);

  const double M = integrate(sol.m);
  const double mass_err = std::abs(integrate(r.m) - M) / M;
  double dm = 0.0, du = 0.0;
  for (std::size_t j = 0; j < sol.m.size(); ++j) {
    dm = std::max(dm, std::abs(back.m[j] - sol.m[j]));
    du = std::max(du, std::abs(back.u[j] - (sol.u[j] - sol.u.min())));
  }
  dm /= sol.m.max();
  du /= std::max(1.0, sol.u.max() - sol.u.min());

  ProblemSpec rp = rescaled_problem(p);
  rp.grid = rg;
  const EnergyBreakdown er = evaluate_energy(rp, FlowPair{r.m, r.w, nullptr});
  const double lam = std::pow(p.epsilon, e.value);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  const double pot_err = rel(er.potential, lam * sol.energy.potential);
  const double int_err = rel(er.interaction, lam * sol.energy.interaction);

  s.add("lambda", sol.lambda);
  s.add("lambda_rescaled", r.lambda);
  s.add("rescaled_half_width", hw[0]);
  s.add("mass_error", mass_err);
  s.add("roundtrip_m", dm);
  s.add("roundtrip_u", du);
  s.add("potential_scaling_error", pot_err);
  s.add("interaction_scaling_error", int_err);
  fail.check(mass_err <= 1e-12, "mass", format_real(mass_err));
  fail.check(dm <= 1e-12 && du <= 1e-12, "roundtrip", "m " + format_real(dm) + ", u " + format_real(du));
  fail.check(pot_err <= 1e-10, "potential_scaling", format_real(pot_err));
  fail.check(int_err <= 1e-10, "interaction_scaling", format_real(int_err));

  CsvTable t({"frame", "epsilon", "lambda", "mass", "potential", "interaction"});
  t.add_row({"original", format_real(p.epsilon), format_real(sol.lambda), format_real(M),
             format_real(sol.energy.potential), format_real(sol.energy.interaction)});
  t.add_row({"rescaled", "1", format_real(r.lambda), format_real(integrate(r.m)), format_real(er.potential),
             format_real(er.interaction)});
  t.write(out / "diagnostics.csv");
  if (cfg.write_fields) write_solution_fields(out, r, "_rescaled");
  log << "lambda~ = " << format_real(r.lambda) << ", mass error " << format_real(mass_err) << "\n";
  return fail.finish(s, out, log);
}

int cmd_verify(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  AcceptanceReport rep = run_acceptance(cfg);
  sweep_table(rep.records).write(out / "diagnostics.csv");
  rep.solves.write(out / "solves.csv");
  Failures fail;
  for (const auto& c : rep.criteria) {
    log << format_criterion(c) << "\n";
    fail.check(c.passed, "criterion " + std::to_string(c.id) + " " + c.name, c.detail);
  }
  std::ostringstream discard;
  return fail.finish(rep.summary, out, discard);
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  static const std::map<std::string_view, Command> names = {{"solve", Command::solve},
                                                            {"sweep", Command::sweep},
                                                            {"choquard", Command::choquard},
                                                            {"rescale", Command::rescale},
                                                            {"verify", Command::verify}};
  const auto it = names.find(name);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

std::string command_name(Command cmd) {
  switch (cmd) {
    case Command::solve: return "solve";
    case Command::sweep: return "sweep";
    case Command::choquard: return "choquard";
    case Command::rescale: return "rescale";
    case Command::verify: return "verify";
  }
  return "unknown";
}

int run_command(Command cmd, const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  try {
    cfg.problem.validate();
    if (cmd == Command::choquard && cfg.problem.gamma != 2.0)
      throw ConfigError("invalid configuration: choquard needs gamma = 2");
    fs::create_directories(out);
    switch (cmd) {
      case Command::solve: return cmd_solve(cfg, out, log);
      case Command::sweep: return cmd_sweep(cfg, out, log);
      case Command::choquard: return cmd_choquard(cfg, out, log);
      case Command::rescale: return cmd_rescale(cfg, out, log);
      case Command::verify: return cmd_verify(cfg, out, log);
    }
  } catch (const ConfigError& e) {
    log << "FAIL config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    log << "FAIL config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "FAIL " << command_name(cmd) << ": " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitFailed;
}

}  // namespace mfglab
