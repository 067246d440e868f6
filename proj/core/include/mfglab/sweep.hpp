#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mfglab/energy.hpp"
#include "mfglab/mfg.hpp"
#include "mfglab/problem.hpp"

namespace mfglab {

struct SweepOptions {
  double R = 6.0;     // ball radius in rescaled units
  double eta = 0.05;  // mass allowed outside the ball
  // Fits use the records with epsilon <= fit_eps_max.
  double fit_eps_max = 0.25;
  int max_recenter = 6;
  MfgOptions mfg;
};

struct SweepRecord {
  double epsilon = 0.0;
  double lambda = 0.0;
  double lambda_rescaled = 0.0;
  double energy_total = 0.0;
  double energy_rescaled = 0.0;
  EnergyBreakdown energy_parts;  // original frame
  Point concentration_point{0.0, 0.0};
  Point translation{0.0, 0.0};  // y_eps in rescaled units
  double mass_in_ball = 0.0;
  double y_eps_scaled = 0.0;
  double sup_m_rescaled = 0.0;
  double tail_slope = 0.0;
  double tail_r2 = 0.0;
  int outer_iterations = 0;
  std::map<std::string, double> ledger_ratios;
  // Rescaled, recentred solution of the rung.
  std::shared_ptr<const MFGSolution> solution;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::string failure;  // empty when every rung converged
  bool ok() const { return failure.empty(); }
};

// One rescaled solve at spec.epsilon: V_eps(y + y_eps) with y_eps chosen
// so that min u~ sits on the center node. Candidates are original-frame
// points; the lowest rescaled energy wins.
struct RungSolve {
  MFGSolution solution;
  Point translation{0.0, 0.0};
};
RungSolve solve_rescaled(const ProblemSpec& spec, const std::vector<Point>& candidates,
                         const std::optional<ScalarField>& init, const SweepOptions& options);

// Vanishing-viscosity continuation over a decreasing ladder, warm-started
// rung to rung.
SweepResult run_sweep(const ProblemSpec& spec, const std::vector<double>& eps_ladder, const SweepOptions& options);

// eps_k = eps0 2^{-k}, k = 0..rungs-1
std::vector<double> geometric_ladder(double eps0, int rungs);

enum class FitQuantity { energy, lambda };

struct ScalingFit {
  double slope = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

// Least squares of log|q| against log eps over records with
// eps <= eps_max. Needs four records, all with q < 0.
ScalingFit fit_scaling_exponent(const std::vector<SweepRecord>& records, FitQuantity quantity,
                                double eps_max = 1e300);
// -gamma'(N - alpha)/(gamma' - N + alpha)
double target_slope(const ProblemSpec& spec);

struct SubadditivityProbe {
  double lhs = 0.0;  // e~(M)
  double rhs = 0.0;  // e~(a) + e~(M - a)
  double e_a = 0.0;
  double e_rest = 0.0;
  double max_duality_residual = 0.0;
  std::vector<MFGSolution> solutions;
};

// Three rescaled solves at spec.epsilon with masses M, a, M - a.
SubadditivityProbe subadditivity_probe(const ProblemSpec& spec, double a, const SweepOptions& options = {});

struct ConcentrationReport {
  bool suppressed = false;  // V = 0: no distinguished point
  Point limit_point{0.0, 0.0};
  double v_at_limit = 0.0;
  double contraction = 0.0;  // ratio of the last two gaps
  bool extrapolated = false;
};

// Richardson extrapolation of the last three concentration points assuming
// geometric convergence. Throws NumericalError when the points are not
// Cauchy (diameter above 10x the penultimate gap and above the resolution
// floor h * eps_min^space).
ConcentrationReport concentration_report(const std::vector<SweepRecord>& records, const ProblemSpec& spec);

}  // namespace mfglab
