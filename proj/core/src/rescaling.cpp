#include "mfglab/rescaling.hpp"

#include <algorithm>
#include <cmath>

#include "mfglab/error.hpp"

namespace mfglab {

namespace {

struct FrameMap {
  double coord = 1.0;    // x_source = coord * x_target
  double density = 1.0;  // m_target = density * m_source
  double value = 1.0;    // u_target = value * u_source
  double lambda = 1.0;
  double drift = 1.0;
};

MFGSolution map_frame(const MFGSolution& sol, const FrameMap& f, double epsilon, const GridSpec& target) {
  MFGSolution out;
  out.u = ScalarField(target);
  out.m = ScalarField(target);
  out.w = VectorField(target);
  const VectorField drift_src = [&] {
    VectorField d(sol.m.grid());
    if (sol.policy) return sol.policy->drift();
    for (int a = 0; a < d.components(); ++a)
      for (std::size_t j = 0; j < sol.m.size(); ++j) d(a, j) = sol.m[j] > 0.0 ? sol.w(a, j) / sol.m[j] : 0.0;
    return d;
  }();
  ScalarField comp(sol.m.grid());
  for (std::size_t j = 0; j < target.size(); ++j) {
    Point x = target.position(j);
    for (int a = 0; a < target.dim(); ++a) x[a] *= f.coord;
    out.u[j] = f.value * interpolate_cubic(sol.u, x);
    out.m[j] = std::max(0.0, f.density * interpolate_cubic(sol.m, x));
  }
  for (int a = 0; a < target.dim(); ++a) {
    comp.values() = drift_src.component(a);
    for (std::size_t j = 0; j < target.size(); ++j) {
      Point x = target.position(j);
      for (int b = 0; b < target.dim(); ++b) x[b] *= f.coord;
      out.w(a, j) = out.m[j] * f.drift * interpolate_cubic(comp, x);
    }
  }
  const double umin = out.u.min();
  for (auto& v : out.u.values()) v -= umin;
  out.lambda = f.lambda * sol.lambda;
  out.epsilon = epsilon;
  out.energy = sol.energy;
  out.energy.kinetic *= f.lambda;
  out.energy.potential *= f.lambda;
  out.energy.interaction *= f.lambda;
  out.energy.total *= f.lambda;
  out.linearized_energy = f.lambda * sol.linearized_energy;
  out.fp_residual = sol.fp_residual;
  out.duality_residual = sol.duality_residual;
  out.hjb_residual = sol.hjb_residual;
  out.outer_iterations = sol.outer_iterations;
  const double mass_src = integrate(sol.m), mass = integrate(out.m);
  out.mass_error = std::abs(mass - mass_src) / mass_src;
  return out;
}

void check_contained(const ScalarField& m) {
  const GridSpec& g = m.grid();
  const double mmax = m.max();
  for (std::size_t j = 0; j < g.size(); ++j) {
    bool edge = false;
    for (int a = 0; a < g.dim(); ++a) edge = edge || g.on_boundary(j, a);
    if (edge && m[j] > 1e-8 * mmax)
      throw DomainError("target grid too small: boundary density exceeds 1e-8 of the maximum");
  }
}

}  // namespace

ScaleExponents exponents(int dim, double gamma, double alpha) {
  if (!(gamma > 1.0)) throw DomainError("gamma must exceed 1");
  const double gc = gamma / (gamma - 1.0);
  const double D = gc - dim + alpha;
  if (!(D > 0.0)) throw DomainError("rescaling needs gamma' - N + alpha > 0");
  ScaleExponents e;
  e.space = gc / D;
  e.value = (dim - alpha) * gc / D;
  e.density = dim * gc / D;
  e.u_exponent = (gc * (dim - alpha) - gc - dim + alpha) / D;
  return e;
}

ScaleExponents exponents(const ProblemSpec& spec) { return exponents(spec.dim, spec.gamma, spec.alpha); }

PotentialSpec rescaled_potential_spec(const ProblemSpec& spec) {
  const ScaleExponents e = exponents(spec);
  const double cs = std::pow(spec.epsilon, e.space);
  PotentialSpec p = spec.potential;
  p.value_scale *= std::pow(spec.epsilon, e.value);
  p.coord_scale *= cs;
  for (double& s : p.shift) s /= cs;
  return p;
}

double rescaled_potential(const ProblemSpec& spec, const Point& y) {
  return rescaled_potential_spec(spec)(y, spec.dim);
}

ProblemSpec rescaled_problem(const ProblemSpec& spec) {
  ProblemSpec r = spec;
  r.potential = rescaled_potential_spec(spec);
  r.epsilon = 1.0;
  return r;
}

MFGSolution rescale_solution(const ProblemSpec& spec, const MFGSolution& sol, const GridSpec& target_grid) {
  const ScaleExponents e = exponents(spec);
  const double eps = spec.epsilon;
  FrameMap f;
  f.coord = std::pow(eps, e.space);
  f.density = std::pow(eps, e.density);
  f.value = std::pow(eps, e.u_exponent);
  f.lambda = std::pow(eps, e.value);
  // drift ~ |grad u|^{gamma-1}
  f.drift = std::pow(eps, (e.u_exponent + e.space) * (spec.gamma - 1.0));
  MFGSolution out = map_frame(sol, f, 1.0, target_grid);
  check_contained(out.m);
  return out;
}

MFGSolution unrescale_solution(const ProblemSpec& spec, const MFGSolution& rescaled, const GridSpec& target_grid) {
  const ScaleExponents e = exponents(spec);
  const double eps = spec.epsilon;
  FrameMap f;
  f.coord = std::pow(eps, -e.space);
  f.density = std::pow(eps, -e.density);
  f.value = std::pow(eps, -e.u_exponent);
  f.lambda = std::pow(eps, -e.value);
  f.drift = std::pow(eps, -(e.u_exponent + e.space) * (spec.gamma - 1.0));
  MFGSolution out = map_frame(rescaled, f, eps, target_grid);
  check_contained(out.m);
  return out;
}

std::array<int, 2> argmin_offset(const MFGSolution& sol) {
  const GridSpec& g = sol.u.grid();
  const auto& v = sol.u.values();
  const std::size_t k = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  const auto idx = g.multi_index(k);
  std::array<int, 2> off{0, 0};
  for (int a = 0; a < g.dim(); ++a) {
    if (g.on_boundary(k, a)) throw DomainError("argmin of u lies on the box boundary; enlarge the box");
    off[a] = idx[a] - (g.points() - 1) / 2;
  }
  return off;
}

Point locate_argmin_translation(const MFGSolution& sol) {
  const auto off = argmin_offset(sol);
  const GridSpec& g = sol.u.grid();
  Point y{0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) y[a] = g.coordinate(a, (g.points() - 1) / 2 + off[a]);
  return y;
}

MFGSolution recenter(const MFGSolution& sol, const std::array<int, 2>& offset) {
  MFGSolution out = sol;
  out.u = shift_nodes(sol.u, offset);
  out.m = shift_nodes(sol.m, offset);
  VectorField w(sol.w.grid());
  for (int a = 0; a < w.components(); ++a) {
    const ScalarField c = shift_nodes(ScalarField(sol.w.grid(), sol.w.component(a)), offset);
    w.component(a) = c.values();
  }
  out.w = std::move(w);
  out.policy.reset();
  const double umin = out.u.min();
  for (auto& v : out.u.values()) v -= umin;
  return out;
}

}  // namespace mfglab
