#include "mfglab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfglab/error.hpp"
#include "mfglab/parallel.hpp"
#include "mfglab/rescaling.hpp"

namespace mfglab {

namespace {

double norm(const Point& p, int dim) { return dim == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]); }

double rmin(const GridSpec& g) {
  double r = g.half_width(0);
  for (int a = 1; a < g.dim(); ++a) r = std::min(r, g.half_width(a));
  return r;
}

// Original-frame points where V0 vanishes.
std::vector<Point> potential_minimizers(const ProblemSpec& spec) {
  std::vector<Point> out;
  const PotentialSpec& p = spec.potential;
  for (const Point& c : p.minimizers(spec.dim)) {
    Point x{0.0, 0.0};
    for (int a = 0; a < spec.dim; ++a) x[a] = c[a] / p.coord_scale - p.shift[a];
    out.push_back(x);
  }
  return out;
}

void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& r2) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  slope = sxy / sxx;
  r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
}

SweepRecord make_record(const ProblemSpec& spec, const ProblemSpec& frame, const RungSolve& rs,
                        const SweepOptions& options) {
  const MFGSolution& S = rs.solution;
  const GridSpec& g = S.m.grid();
  const ScaleExponents ex = exponents(spec);
  const double eps = spec.epsilon;
  const double back = std::pow(eps, -ex.value), cs = std::pow(eps, ex.space);
  const auto W = trapezoid_weights(g);

  SweepRecord r;
  r.epsilon = eps;
  r.lambda_rescaled = S.lambda;
  r.lambda = back * S.lambda;
  r.energy_rescaled = S.energy.total;
  r.energy_total = back * S.energy.total;
  r.energy_parts = S.energy;
  r.energy_parts.kinetic *= back;
  r.energy_parts.potential *= back;
  r.energy_parts.interaction *= back;
  r.energy_parts.total *= back;
  r.translation = rs.translation;
  // Sub-node position of min u~ from a parabola through the center node
  // and its neighbours.
  const std::size_t c = g.center_node();
  for (int a = 0; a < spec.dim; ++a) {
    const std::size_t s = g.stride(a);
    const double um = S.u[c - s], u0 = S.u[c], up = S.u[c + s];
    const double curv = um - 2.0 * u0 + up;
    const double delta = curv > 0.0 ? 0.5 * g.spacing(a) * (um - up) / curv : 0.0;
    r.concentration_point[a] = cs * (rs.translation[a] + delta);
  }
  r.y_eps_scaled = norm(r.concentration_point, spec.dim);
  r.sup_m_rescaled = S.m.max();
  r.outer_iterations = S.outer_iterations;

  const double Rbox = rmin(g);
  std::vector<double> tx, ty;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d = norm(g.position(j), spec.dim);
    if (d <= options.R) r.mass_in_ball += W[j] * S.m[j];
    if (d >= 0.5 * Rbox && S.m[j] > 1e-300) {
      tx.push_back(d);
      ty.push_back(std::log(S.m[j]));
    }
  }
  if (tx.size() >= 3) {
    linear_fit(tx, ty, r.tail_slope, r.tail_r2);
  } else {
    r.tail_slope = std::numeric_limits<double>::quiet_NaN();
    r.tail_r2 = 0.0;
  }

  auto& L = r.ledger_ratios;
  L["hls_ratio"] = hls_ratio(frame, S.m);
  L["hls_ratio_over_sharp"] = L["hls_ratio"] / hls_sharp_constant(spec.dim, spec.alpha);
  L["kinetic_lbeta_ratio"] = kinetic_lbeta_ratio(frame, S.m, S.energy.kinetic);
  const double bg = spec.potential.growth() / spec.gamma;
  {
    const VectorField du = gradient_upwind(S.u, UpwindBias::central);
    double gb = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      gb = std::max(gb, du.norm(j) / (1.0 + std::pow(norm(g.position(j), spec.dim), bg)));
    L["grad_bound"] = gb;
  }
  {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const int c = (g.points() - 1) / 2, e = g.points() - 1;
    std::vector<std::array<int, 2>> mids;
    if (spec.dim == 1) {
      mids = {{0, 0}, {e, 0}};
    } else {
      mids = {{0, c}, {e, c}, {c, 0}, {c, e}};
    }
    for (const auto& mi : mids) {
      const std::size_t j = static_cast<std::size_t>(mi[0]) * g.stride(0) +
                            (spec.dim == 2 ? static_cast<std::size_t>(mi[1]) * g.stride(1) : 0);
      const double ratio = S.u[j] / std::pow(norm(g.position(j), spec.dim), 1.0 + bg);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    L["coercivity_min"] = lo;
    L["coercivity_max"] = hi;
  }
  {
    double vmax = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (norm(g.position(j), spec.dim) <= options.R)
        vmax = std::max(vmax, frame.potential(g.position(j), spec.dim));
    L["V_eps_window_max"] = vmax;
  }
  L["duality_residual"] = S.duality_residual;
  L["hjb_residual"] = S.hjb_residual;
  L["fp_residual"] = S.fp_residual;
  L["mass_error"] = S.mass_error;
  L["min_m"] = S.m.min();
  L["boundary_ratio"] = boundary_ratio(S.m);
  return r;
}

struct CandidateResult {
  bool ok = false;
  RungSolve rs;
  std::string error;
};

RungSolve solve_from(const ProblemSpec& spec, const Point& x0, const std::optional<ScalarField>& init,
                     const SweepOptions& options) {
  const ScaleExponents ex = exponents(spec);
  const double cs = std::pow(spec.epsilon, ex.space);
  ProblemSpec frame = rescaled_problem(spec);
  const GridSpec& g = frame.grid;
  Point t{0.0, 0.0};
  for (int a = 0; a < spec.dim; ++a) {
    t[a] = x0[a] / cs;
    frame.potential.shift[a] += t[a];
  }
  std::optional<ScalarField> start = init;
  for (int k = 0; k <= options.max_recenter; ++k) {
    std::optional<MFGSolution> tried;
    try {
      tried = solve_mfg(frame, start, options.mfg);
    } catch (const MfgSolveError&) {
      // A warm start off the symmetry node of a nearly flat V_eps drifts
      // too slowly to converge; retry from the cold start.
      if (!start) throw;
      start.reset();
      tried = solve_mfg(frame, start, options.mfg);
    }
    MFGSolution sol = std::move(*tried);
    const auto off = argmin_offset(sol);
    if (off[0] == 0 && off[1] == 0) return RungSolve{std::move(sol), t};
    for (int a = 0; a < spec.dim; ++a) {
      t[a] += off[a] * g.spacing(a);
      frame.potential.shift[a] += off[a] * g.spacing(a);
    }
    start = shift_nodes(sol.m, off);
  }
  throw ConvergenceError("recentering did not settle the argmin of u on the center node", 0.0,
                         options.max_recenter);
}

}  // namespace

RungSolve solve_rescaled(const ProblemSpec& spec, const std::vector<Point>& candidates,
                         const std::optional<ScalarField>& init, const SweepOptions& options) {
  std::vector<Point> pts;
  const double cs = std::pow(spec.epsilon, exponents(spec).space);
  const double sep = 2.0 * spec.grid.h() * cs;
  for (const Point& p : candidates) {
    bool dup = false;
    for (const Point& q : pts) dup = dup || norm(Point{p[0] - q[0], p[1] - q[1]}, spec.dim) < sep;
    if (!dup) pts.push_back(p);
  }
  if (pts.empty()) pts.push_back(Point{0.0, 0.0});
  std::vector<CandidateResult> res(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    try {
      res[i].rs = solve_from(spec, pts[i], init, options);
      res[i].ok = true;
    } catch (const Error& e) {
      res[i].error = e.what();
    }
  });
  int best = -1;
  for (std::size_t i = 0; i < res.size(); ++i)
    if (res[i].ok && (best < 0 || res[i].rs.solution.energy.total < res[best].rs.solution.energy.total))
      best = static_cast<int>(i);
  if (best < 0) throw ConvergenceError("every candidate solve failed: " + res.front().error, 0.0, 0);
  return std::move(res[best].rs);
}

std::vector<double> geometric_ladder(double eps0, int rungs) {
  if (!(eps0 > 0.0) || rungs < 1) throw DomainError("ladder needs eps0 > 0 and at least one rung");
  std::vector<double> out;
  for (int k = 0; k < rungs; ++k) out.push_back(eps0 * std::ldexp(1.0, -k));
  return out;
}

SweepResult run_sweep(const ProblemSpec& spec, const std::vector<double>& eps_ladder, const SweepOptions& options) {
  spec.validate();
  if (eps_ladder.empty()) throw DomainError("empty epsilon ladder");
  for (std::size_t k = 0; k < eps_ladder.size(); ++k) {
    if (!(eps_ladder[k] > 0.0)) throw DomainError("ladder values must be positive");
    if (k > 0 && !(eps_ladder[k] < eps_ladder[k - 1])) throw DomainError("ladder must be strictly decreasing");
  }
  SweepResult out;
  std::optional<ScalarField> warm;
  std::optional<Point> prev;
  const auto minimizers = potential_minimizers(spec);
  for (double eps : eps_ladder) {
    ProblemSpec s = spec;
    s.epsilon = eps;
    std::vector<Point> cands;
    if (prev) cands.push_back(*prev);
    cands.insert(cands.end(), minimizers.begin(), minimizers.end());
    try {
      RungSolve rs = solve_rescaled(s, cands, warm, options);
      ProblemSpec frame = rescaled_problem(s);
      for (int a = 0; a < s.dim; ++a) frame.potential.shift[a] += rs.translation[a];
      SweepRecord rec = make_record(s, frame, rs, options);
      warm = rs.solution.m;
      prev = rec.concentration_point;
      rec.solution = std::make_shared<const MFGSolution>(std::move(rs.solution));
      out.records.push_back(std::move(rec));
    } catch (const Error& e) {
      out.failure = "epsilon = " + std::to_string(eps) + ": " + e.what();
      break;
    }
  }
  return out;
}

ScalingFit fit_scaling_exponent(const std::vector<SweepRecord>& records, FitQuantity quantity, double eps_max) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (r.epsilon > eps_max) continue;
    const double q = quantity == FitQuantity::energy ? r.energy_total : r.lambda;
    if (!(q < 0.0)) throw DomainError("scaling fit needs strictly negative values in the window");
    x.push_back(std::log(r.epsilon));
    y.push_back(std::log(-q));
  }
  if (x.size() < 4) throw DomainError("scaling fit needs at least four records in the window");
  ScalingFit f;
  linear_fit(x, y, f.slope, f.r_squared);
  f.points = static_cast<int>(x.size());
  return f;
}

double target_slope(const ProblemSpec& spec) { return -exponents(spec).value; }

SubadditivityProbe subadditivity_probe(const ProblemSpec& spec, double a, const SweepOptions& options) {
  if (!(a > 0.0 && a < spec.mass)) throw DomainError("subadditivity probe needs 0 < a < M");
  const double masses[3] = {spec.mass, a, spec.mass - a};
  const auto cands = potential_minimizers(spec);
  std::vector<MFGSolution> sols(3);
  parallel_for(3, [&](std::size_t i) {
    ProblemSpec s = spec;
    s.mass = masses[i];
    sols[i] = solve_rescaled(s, cands, std::nullopt, options).solution;
  });
  SubadditivityProbe p;
  p.lhs = sols[0].energy.total;
  p.e_a = sols[1].energy.total;
  p.e_rest = sols[2].energy.total;
  p.rhs = p.e_a + p.e_rest;
  for (const auto& s : sols) p.max_duality_residual = std::max(p.max_duality_residual, s.duality_residual);
  p.solutions = std::move(sols);
  return p;
}

ConcentrationReport concentration_report(const std::vector<SweepRecord>& records, const ProblemSpec& spec) {
  if (records.size() < 3) throw DomainError("concentration report needs at least three records");
  ConcentrationReport rep;
  if (spec.potential.kind == PotentialKind::zero) {
    rep.suppressed = true;
    return rep;
  }
  const int dim = spec.dim;
  const Point& x1 = records[records.size() - 3].concentration_point;
  const Point& x2 = records[records.size() - 2].concentration_point;
  const Point& x3 = records.back().concentration_point;
  auto dist = [&](const Point& p, const Point& q) { return norm(Point{p[0] - q[0], p[1] - q[1]}, dim); };
  const double g1 = dist(x2, x1), g2 = dist(x3, x2);
  const double diam = std::max({g1, g2, dist(x3, x1)});
  const double floor = spec.grid.h() * std::pow(records.back().epsilon, exponents(spec).space);
  if (diam > floor && diam > 10.0 * g1)
    throw NumericalError("concentration points are not Cauchy: diameter " + std::to_string(diam) +
                         " exceeds 10x the penultimate gap " + std::to_string(g1));
  rep.limit_point = x3;
  rep.contraction = g1 > 0.0 ? g2 / g1 : 0.0;
  if (diam > floor && rep.contraction > 0.0 && rep.contraction < 1.0) {
    // Geometric tail: x_inf = x3 + (x3 - x2) q / (1 - q)
    const double f = rep.contraction / (1.0 - rep.contraction);
    for (int a = 0; a < dim; ++a) rep.limit_point[a] = x3[a] + (x3[a] - x2[a]) * f;
    rep.extrapolated = true;
  }
  rep.v_at_limit = spec.potential(rep.limit_point, dim);
  return rep;
}

}  // namespace mfglab
