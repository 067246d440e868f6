#include "mfglab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "mfglab/choquard.hpp"
#include "mfglab/error.hpp"
#include "mfglab/fokker_planck.hpp"
#include "mfglab/hjb.hpp"
#include "mfglab/mfg.hpp"
#include "mfglab/rescaling.hpp"
#include "mfglab/riesz.hpp"

namespace mfglab {

namespace {

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string g3(double v) { return fmt("%.3g", v); }

// Bookkeeping over every converged MFG solve of the battery.
struct SolveLedger {
  double max_duality = 0.0;
  double max_mass_error = 0.0;
  double min_m = std::numeric_limits<double>::infinity();
  int solves = 0;

  void add(const MFGSolution& s) {
    max_duality = std::max(max_duality, s.duality_residual);
    max_mass_error = std::max(max_mass_error, s.mass_error);
    min_m = std::min(min_m, s.m.min());
    ++solves;
  }
};

double l1_distance(const ScalarField& a, const ScalarField& b) {
  const auto W = trapezoid_weights(a.grid());
  double s = 0.0;
  for (std::size_t j = 0; j < W.size(); ++j) s += W[j] * std::abs(a[j] - b[j]);
  return s;
}

struct CrossCheck {
  double lambda_rel = 0.0;
  double density_l1 = 0.0;
};

CrossCheck cross_check(const ProblemSpec& spec, const MFGSolution& mfg, const ChoquardOptions& opt) {
  const ChoquardState c = solve_choquard(spec, opt);
  CrossCheck x;
  x.lambda_rel = std::abs(mfg.lambda - c.mu) / std::max(std::abs(mfg.lambda), 1e-12);
  x.density_l1 = l1_distance(mfg.m, c.density()) / spec.mass;
  return x;
}

// Max relative error of the drift-policy stationary density for drift -x
// against exp(-x^2 / 2) (gamma = 2, eps = 1, box [-8, 8]).
double gibbs_error(int n) {
  ProblemSpec s;
  s.grid = GridSpec(1, 8.0, n);
  s.coupling = 0.0;
  const GridSpec& g = s.grid;
  VectorField d(g);
  ScalarField exact(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.position(j)[0];
    d(0, j) = -x;
    exact[j] = std::exp(-0.5 * x * x);
  }
  const double z = s.mass / integrate(exact);
  for (auto& v : exact.values()) v *= z;
  const StationaryDensity fp = solve_stationary(s, d);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(fp.m[j] - exact[j]));
  return err / exact.max();
}

// Relative gap between the FFT interaction energy and the direct double sum.
double riesz_direct_gap() {
  const GridSpec g(1, 6.0, 201);
  const double alpha = 0.5;
  const RieszKernelTable K = tabulate_kernel(g, alpha);
  ScalarField m(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.position(j)[0];
    m[j] = std::exp(-x * x) / std::sqrt(std::numbers::pi);
  }
  const auto W = trapezoid_weights(g);
  double direct = 0.0;
  for (int i = 0; i < g.points(); ++i)
    for (int j = 0; j < g.points(); ++j) direct += W[i] * W[j] * m[i] * m[j] * K.value(i - j);
  const double fast = interaction_energy(K, m);
  return std::abs(fast - direct) / direct;
}

double dilation_slope(int dim, double alpha, double mass) {
  const GridSpec g = dim == 1 ? GridSpec(1, 16.0, 4097) : GridSpec(2, 12.0, 257);
  const auto K = cached_kernel(g, alpha);
  std::vector<double> x, y;
  for (int k = 0; k <= 8; ++k) {
    const double tau = std::pow(4.0, k / 8.0);
    ScalarField m(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Point p = g.position(j);
      m[j] = std::exp(-tau * std::hypot(p[0], dim == 2 ? p[1] : 0.0));
    }
    const double z = mass / integrate(m);
    for (auto& v : m.values()) v *= z;
    x.push_back(std::log(tau));
    y.push_back(std::log(interaction_energy(*K, m)));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Stencil exactness on polynomials; returns the worst deviation.
double stencil_exactness() {
  double worst = 0.0;
  {
    const GridSpec g(1, 2.0, 41);  // h = 0.1
    ScalarField lin(g), quad(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g.position(j)[0];
      lin[j] = x;
      quad[j] = x * x;
    }
    for (auto b : {UpwindBias::backward, UpwindBias::forward, UpwindBias::central, UpwindBias::monotone_hjb}) {
      const VectorField d = gradient_upwind(lin, b);
      for (std::size_t j = 1; j + 1 < g.size(); ++j) worst = std::max(worst, std::abs(d(0, j) - 1.0));
    }
    const ScalarField lap = laplacian(quad);
    for (std::size_t j = 1; j + 1 < g.size(); ++j) worst = std::max(worst, std::abs(lap[j] - 2.0));
    const std::size_t at1 = 30;  // x = 1
    worst = std::max(worst, std::abs(gradient_upwind(quad, UpwindBias::backward)(0, at1) - 1.9));
    worst = std::max(worst, std::abs(gradient_upwind(quad, UpwindBias::forward)(0, at1) - 2.1));
    worst = std::max(worst, std::abs(gradient_upwind(quad, UpwindBias::central)(0, at1) - 2.0));
  }
  {
    const GridSpec g(2, 1.0, 21);
    ScalarField lin(g), quad(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Point p = g.position(j);
      lin[j] = p[0] - 2.0 * p[1];
      quad[j] = p[0] * p[0] + 3.0 * p[1] * p[1];
    }
    const VectorField d = gradient_upwind(lin, UpwindBias::central);
    const ScalarField lap = laplacian(quad);
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g.on_boundary(j, 0) || g.on_boundary(j, 1)) continue;
      worst = std::max({worst, std::abs(d(0, j) - 1.0), std::abs(d(1, j) + 2.0), std::abs(lap[j] - 8.0)});
    }
  }
  return worst;
}

// Worst violation of kinetic(t P1 + (1-t) P2) <= t kinetic(P1) + (1-t) kinetic(P2)
// over random Gibbs pairs (gamma = 2), mixed edge by edge in the fluxes.
double convexity_violation(int dim, int pairs, std::mt19937_64& rng) {
  ProblemSpec s;
  s.dim = dim;
  s.alpha = dim == 1 ? 0.5 : 1.0;
  s.grid = dim == 1 ? GridSpec(1, 8.0, 257) : GridSpec(2, 6.0, 41);
  const GridSpec& g = s.grid;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto random_pair = [&] {
    const double a = 0.2 + 1.8 * U(rng), c0 = -2.0 + 4.0 * U(rng), c1 = -2.0 + 4.0 * U(rng);
    const double b = U(rng), k = 0.5 + 2.0 * U(rng), ph = 6.283185307179586 * U(rng);
    ScalarField psi(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Point p = g.position(j);
      const double r2 = (p[0] - c0) * (p[0] - c0) + (dim == 2 ? (p[1] - c1) * (p[1] - c1) : 0.0);
      psi[j] = a * r2 / (1.0 + 0.05 * r2) + b * std::sin(k * p[0] + ph);
    }
    auto pol = std::make_shared<TransportPolicy>(gibbs_policy(psi, s.epsilon, 2.0));
    ScalarField m(g);
    for (std::size_t j = 0; j < g.size(); ++j) m[j] = std::exp(-(psi[j] - psi.min()) / s.epsilon);
    const double z = s.mass / integrate(m);
    for (auto& v : m.values()) v *= z;
    return FlowPair{std::move(m), VectorField(g), std::move(pol)};
  };
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < pairs; ++k) {
    const FlowPair P1 = random_pair(), P2 = random_pair();
    const double t = U(rng);
    ScalarField m(g);
    for (std::size_t j = 0; j < g.size(); ++j) m[j] = t * P1.m[j] + (1.0 - t) * P2.m[j];
    auto mix = std::make_shared<TransportPolicy>(g, s.epsilon, 2.0);
    for (int a = 0; a < dim; ++a)
      for (std::size_t j = 0; j < g.size(); ++j) {
        mix->rate_plus(a)[j] =
            (t * P1.m[j] * P1.policy->rate_plus(a)[j] + (1.0 - t) * P2.m[j] * P2.policy->rate_plus(a)[j]) / m[j];
        mix->rate_minus(a)[j] =
            (t * P1.m[j] * P1.policy->rate_minus(a)[j] + (1.0 - t) * P2.m[j] * P2.policy->rate_minus(a)[j]) / m[j];
      }
    mix->update_cost();
    const FlowPair P{m, VectorField(g), mix};
    const double k1 = kinetic_term(s, P1), k2 = kinetic_term(s, P2), km = kinetic_term(s, P);
    const double rhs = t * k1 + (1.0 - t) * k2;
    worst = std::max(worst, (km - rhs) / (1.0 + std::abs(rhs)));
  }
  return worst;
}

// Worst relative size of <w m, G phi> over random phi: the discrete form of
// eps <m, -Lap phi> = <w, grad phi>.
double adjoint_identity(const MFGSolution& sol, int fields, std::mt19937_64& rng) {
  const auto W = trapezoid_weights(sol.m.grid());
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < fields; ++k) {
    std::vector<double> phi(W.size());
    for (auto& v : phi) v = U(rng);
    const auto Gphi = sol.policy->apply(phi);
    double s = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < W.size(); ++j) {
      s += W[j] * sol.m[j] * Gphi[j];
      scale += std::abs(W[j] * sol.m[j] * Gphi[j]);
    }
    worst = std::max(worst, std::abs(s) / scale);
  }
  return worst;
}

std::vector<Point> original_minimizers(const ProblemSpec& spec) {
  std::vector<Point> out;
  const PotentialSpec& p = spec.potential;
  for (const Point& c : p.minimizers(spec.dim)) {
    Point x{0.0, 0.0};
    for (int a = 0; a < spec.dim; ++a) x[a] = c[a] / p.coord_scale - p.shift[a];
    out.push_back(x);
  }
  return out;
}

}  // namespace

bool AcceptanceReport::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

std::string format_criterion(const CriterionResult& c) {
  return std::string(c.passed ? "[PASS] " : "[FAIL] ") + std::to_string(c.id) + " " + c.name + ": " + c.detail;
}

AcceptanceReport run_acceptance(const RunConfig& cfg) {
  AcceptanceReport rep;
  SolveLedger ledger;
  std::mt19937_64 rng(cfg.seed);
  Summary& S = rep.summary;
  const MfgOptions& mopt = cfg.sweep.mfg;

  auto guarded = [&](int id, const std::string& name, const auto& body) {
    CriterionResult c{id, name, false, ""};
    try {
      body(c);
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("error: ") + e.what();
    }
    return c;
  };

  // Reference solve at gamma = 2 for the cross-solver oracle.
  ProblemSpec ref = cfg.problem;
  ref.gamma = 2.0;
  std::optional<MFGSolution> ref_sol;
  std::optional<MFGSolution> smoke_sol;
  ProblemSpec smoke;
  smoke.dim = 2;
  smoke.gamma = 2.0;
  smoke.alpha = 1.0;
  smoke.epsilon = 1.0;
  smoke.potential.kind = PotentialKind::power;
  smoke.potential.b = 2.0;
  smoke.potential.center = {0.3, 0.0};
  smoke.grid = GridSpec(2, 6.0, 65);

  // Sweep and sub-additivity probe feed criteria 1, 4, 5, 6, 7 and 9.
  SweepResult sweep = run_sweep(cfg.problem, cfg.ladder, cfg.sweep);
  rep.records = sweep.records;
  for (const auto& r : sweep.records) ledger.add(*r.solution);

  CriterionResult c2 = guarded(2, "cross-solver oracle", [&](CriterionResult& c) {
    ref_sol = solve_mfg(ref, std::nullopt, mopt);
    ledger.add(*ref_sol);
    add_solve_row(rep.solves, "mfg", *ref_sol);
    const CrossCheck x = cross_check(ref, *ref_sol, cfg.choquard);
    c.passed = x.lambda_rel <= 1e-4 && x.density_l1 <= 1e-3;
    c.detail = "1D lambda rel " + g3(x.lambda_rel) + ", density L1 " + g3(x.density_l1);
    S.add("cross_lambda_rel", x.lambda_rel);
    S.add("cross_density_l1", x.density_l1);
    if (cfg.smoke_2d) {
      smoke_sol = solve_mfg(smoke, std::nullopt, mopt);
      ledger.add(*smoke_sol);
      add_solve_row(rep.solves, "mfg_2d", *smoke_sol);
      const CrossCheck y = cross_check(smoke, *smoke_sol, cfg.choquard);
      c.passed = c.passed && y.lambda_rel <= 1e-4 && y.density_l1 <= 1e-3;
      c.detail += "; 2D lambda rel " + g3(y.lambda_rel) + ", density L1 " + g3(y.density_l1);
      S.add("cross_2d_lambda_rel", y.lambda_rel);
      S.add("cross_2d_density_l1", y.density_l1);
    }
  });

  std::optional<SubadditivityProbe> probe;
  CriterionResult c6 = guarded(6, "strict sub-additivity", [&](CriterionResult& c) {
    ProblemSpec s = cfg.problem;
    s.epsilon = cfg.subadditivity_eps;
    probe = subadditivity_probe(s, cfg.subadditivity_fraction * s.mass, cfg.sweep);
    for (const auto& sol : probe->solutions) ledger.add(sol);
    const double margin = probe->rhs - probe->lhs;
    const double tol = 10.0 * mopt.tol * (1.0 + std::abs(probe->lhs));
    c.passed = probe->lhs < probe->rhs && margin > tol;
    c.detail = "e(M) = " + fmt("%.8g", probe->lhs) + " < e(a) + e(M-a) = " + fmt("%.8g", probe->rhs) +
               ", margin " + g3(margin) + " vs " + g3(tol);
    S.add("subadditivity_lhs", probe->lhs);
    S.add("subadditivity_rhs", probe->rhs);
  });

  CriterionResult c1{1, "duality identity", false, ""};
  c1.passed = sweep.ok() && ledger.solves > 0 && ledger.max_duality <= 1e-6;
  c1.detail = "max |lambda M - E~| / |lambda M| = " + g3(ledger.max_duality) + " over " +
              std::to_string(ledger.solves) + " solves" + (sweep.ok() ? "" : "; sweep failed: " + sweep.failure);
  S.add("max_duality_residual", ledger.max_duality);

  CriterionResult c3 = guarded(3, "analytic oracles", [&](CriterionResult& c) {
    const double e1 = gibbs_error(129), e2 = gibbs_error(257), e3 = gibbs_error(513);
    const double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
    const bool a = o1 >= 1.8 && o2 >= 1.8 && e3 < 1e-3;
    ProblemSpec h;
    h.grid = GridSpec(1, 8.0, 513);
    h.coupling = 0.0;
    h.potential.center = {0.0, 0.0};
    const double lam = solve_ergodic(h, h.sample_potential(), mopt.hjb).lambda;
    const double dl = std::abs(lam - std::sqrt(2.0));
    const bool b = dl <= 5e-3;
    const double gap = riesz_direct_gap();
    const bool r = gap <= 1e-8;
    c.passed = a && b && r;
    c.detail = "(a) Gibbs errors " + g3(e1) + ", " + g3(e2) + ", " + g3(e3) + " orders " + fmt("%.2f", o1) + ", " +
               fmt("%.2f", o2) + (a ? "" : " [fail]") + "; (b) |lambda - sqrt2| = " + g3(dl) + (b ? "" : " [fail]") +
               "; (c) FFT vs direct " + g3(gap) + (r ? "" : " [fail]");
    S.add("gibbs_order", std::min(o1, o2));
    S.add("hjb_sqrt2_error", dl);
    S.add("riesz_direct_gap", gap);
  });

  CriterionResult c4 = guarded(4, "scaling exponents", [&](CriterionResult& c) {
    const double target = target_slope(cfg.problem);
    const ScalingFit fe = fit_scaling_exponent(sweep.records, FitQuantity::energy, cfg.sweep.fit_eps_max);
    const ScalingFit fl = fit_scaling_exponent(sweep.records, FitQuantity::lambda, cfg.sweep.fit_eps_max);
    auto ok = [&](const ScalingFit& f) {
      return std::abs(f.slope - target) <= 0.1 * std::abs(target) && f.r_squared >= 0.99;
    };
    c.passed = sweep.ok() && ok(fe) && ok(fl);
    c.detail = "target " + fmt("%.4f", target) + "; energy slope " + fmt("%.4f", fe.slope) + " (r2 " +
               fmt("%.5f", fe.r_squared) + "), lambda slope " + fmt("%.4f", fl.slope) + " (r2 " +
               fmt("%.5f", fl.r_squared) + ") over " + std::to_string(fe.points) + " rungs";
    S.add("target_slope", target);
    S.add("energy_slope", fe.slope);
    S.add("energy_r2", fe.r_squared);
    S.add("lambda_slope", fl.slope);
    S.add("lambda_r2", fl.r_squared);
  });

  CriterionResult c5 = guarded(5, "concentration", [&](CriterionResult& c) {
    const double M = cfg.problem.mass;
    double worst_ball = std::numeric_limits<double>::infinity();
    for (const auto& r : sweep.records)
      if (r.epsilon <= 0.125) worst_ball = std::min(worst_ball, r.mass_in_ball);
    if (!std::isfinite(worst_ball)) throw DomainError("no rung with epsilon <= 1/8");
    const bool ball = worst_ball >= M - cfg.sweep.eta;
    const ConcentrationReport cr = concentration_report(sweep.records, cfg.problem);
    if (cr.suppressed) {
      c.passed = sweep.ok() && ball;
      c.detail = "min mass in ball " + fmt("%.6f", worst_ball) + "; limit point suppressed (V = 0)";
      return;
    }
    const auto mins = original_minimizers(cfg.problem);
    double dist = std::numeric_limits<double>::infinity();
    for (const Point& p : mins) {
      const double d = cfg.problem.dim == 1 ? std::abs(cr.limit_point[0] - p[0])
                                            : std::hypot(cr.limit_point[0] - p[0], cr.limit_point[1] - p[1]);
      dist = std::min(dist, d);
    }
    const double eps_min = sweep.records.back().epsilon;
    const double tol = std::max(cfg.problem.grid.h(), std::pow(eps_min, exponents(cfg.problem).space));
    c.passed = sweep.ok() && ball && dist <= tol && cr.v_at_limit <= 1e-3;
    c.detail = "min mass in ball " + fmt("%.6f", worst_ball) + " (>= " + fmt("%.3f", M - cfg.sweep.eta) +
               "); limit x = " + fmt("%.6f", cr.limit_point[0]) +
               (cfg.problem.dim == 2 ? ", " + fmt("%.6f", cr.limit_point[1]) : "") + ", distance to argmin V " +
               g3(dist) + " (tol " + g3(tol) + "), V(limit) = " + g3(cr.v_at_limit);
    S.add("limit_point_0", cr.limit_point[0]);
    S.add("limit_point_1", cr.limit_point[1]);
    S.add("v_at_limit", cr.v_at_limit);
    S.add("min_mass_in_ball", worst_ball);
  });

  CriterionResult c7 = guarded(7, "conservation and positivity", [&](CriterionResult& c) {
    double adj = 0.0;
    if (ref_sol) adj = std::max(adj, adjoint_identity(*ref_sol, cfg.random_fields, rng));
    if (smoke_sol) adj = std::max(adj, adjoint_identity(*smoke_sol, cfg.random_fields, rng));
    if (!sweep.records.empty())
      adj = std::max(adj, adjoint_identity(*sweep.records.back().solution, cfg.random_fields, rng));
    c.passed = ledger.solves > 0 && ledger.max_mass_error <= 1e-10 && ledger.min_m >= 0.0 && adj <= 1e-10;
    c.detail = "max mass error " + g3(ledger.max_mass_error) + ", min m " + g3(ledger.min_m) + " over " +
               std::to_string(ledger.solves) + " solves; adjoint identity " + g3(adj) + " on " +
               std::to_string(cfg.random_fields) + " random fields";
    S.add("max_mass_error", ledger.max_mass_error);
    S.add("min_m", ledger.min_m);
    S.add("adjoint_identity", adj);
  });

  CriterionResult c8 = guarded(8, "monotonicity and invariance battery", [&](CriterionResult& c) {
    // HJB shift covariance on the reference forcing.
    ProblemSpec h = cfg.problem;
    ScalarField f = h.sample_potential();
    if (ref_sol && h.coupling != 0.0) {
      const ScalarField km = convolve(*cached_kernel(h.grid, h.alpha), ref_sol->m);
      for (std::size_t j = 0; j < f.size(); ++j) f[j] -= h.coupling * km[j];
    }
    const double shift = 0.7;
    ScalarField f2 = f;
    for (auto& v : f2.values()) v += shift;
    const ErgodicSolution a = solve_ergodic(h, f, mopt.hjb), b = solve_ergodic(h, f2, mopt.hjb);
    double du = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) du = std::max(du, std::abs(a.u[j] - b.u[j]));
    const double dl = std::abs(b.lambda - a.lambda - shift);
    const bool cov = dl <= 1e-12 && du <= 1e-12 * std::max(1.0, a.u.max());
    const double stencil = stencil_exactness();
    const bool st = stencil <= 1e-12;
    const double slope = dilation_slope(cfg.problem.dim, cfg.problem.alpha, cfg.problem.mass);
    const double want = cfg.problem.dim - cfg.problem.alpha;
    const bool dil = std::abs(slope - want) <= 0.02 * want;
    const double conv = convexity_violation(cfg.problem.dim, cfg.convexity_pairs, rng);
    const bool cx = conv <= 1e-12;
    c.passed = cov && st && dil && cx;
    c.detail = "shift covariance dlambda " + g3(dl) + ", du " + g3(du) + (cov ? "" : " [fail]") + "; stencils " +
               g3(stencil) + (st ? "" : " [fail]") + "; dilation slope " + fmt("%.5f", slope) + " vs " +
               fmt("%.3f", want) + (dil ? "" : " [fail]") + "; convexity worst excess " + g3(conv) + " over " +
               std::to_string(cfg.convexity_pairs) + " pairs" + (cx ? "" : " [fail]");
    S.add("hjb_shift_lambda_error", dl);
    S.add("hjb_shift_u_error", du);
    S.add("stencil_error", stencil);
    S.add("dilation_slope", slope);
    S.add("convexity_excess", conv);
  });

  CriterionResult c9 = guarded(9, "tail decay", [&](CriterionResult& c) {
    double worst_slope = -std::numeric_limits<double>::infinity(), worst_r2 = 1.0;
    bool ok = sweep.ok() && !sweep.records.empty();
    for (const auto& r : sweep.records) {
      ok = ok && r.tail_slope < 0.0 && r.tail_r2 >= 0.95;
      worst_slope = std::max(worst_slope, r.tail_slope);
      worst_r2 = std::min(worst_r2, r.tail_r2);
    }
    c.passed = ok;
    c.detail = "largest tail slope " + fmt("%.4f", worst_slope) + ", smallest r2 " + fmt("%.4f", worst_r2) +
               " over " + std::to_string(sweep.records.size()) + " rescaled solves";
    S.add("worst_tail_slope", worst_slope);
    S.add("worst_tail_r2", worst_r2);
  });

  // Criterion 1 also counts the solves made by criteria 2 and 6.
  c1.passed = sweep.ok() && ledger.solves > 0 && ledger.max_duality <= 1e-6;
  c1.detail = "max |lambda M - E~| / |lambda M| = " + g3(ledger.max_duality) + " over " +
              std::to_string(ledger.solves) + " solves" + (sweep.ok() ? "" : "; sweep failed: " + sweep.failure);

  rep.criteria = {c1, c2, c3, c4, c5, c6, c7, c8, c9};
  for (const auto& c : rep.criteria) S.add("criterion_" + std::to_string(c.id), c.passed ? "pass" : "fail");
  S.add("all_passed", rep.all_passed() ? "true" : "false");
  return rep;
}

}  // namespace mfglab
