#include "mfglab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfglab/error.hpp"

namespace mfglab {

namespace {

double dist(const Point& x, const Point& c, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
  return std::sqrt(s);
}

double radius(const Point& c, int dim) { return dist(c, Point{0.0, 0.0}, dim); }

}  // namespace

double PotentialSpec::operator()(const Point& x, int dim) const {
  Point z{0.0, 0.0};
  for (int a = 0; a < dim; ++a) z[a] = coord_scale * (x[a] + shift[a]);
  double v = 0.0;
  switch (kind) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::power: v = std::pow(dist(z, center, dim), b); break;
    case PotentialKind::shifted_power: v = std::pow(std::max(dist(z, center, dim) - r0, 0.0), b); break;
    case PotentialKind::multi_well:
      v = amplitude;
      for (const auto& w : wells) v *= std::pow(dist(z, w.center, dim), w.b);
      break;
    case PotentialKind::custom_table: v = interpolate_cubic(*table, z); break;
  }
  return value_scale * v;
}

double PotentialSpec::growth() const {
  switch (kind) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::multi_well: {
      double s = 0.0;
      for (const auto& w : wells) s += w.b;
      return s;
    }
    default: return b;
  }
}

std::vector<Point> PotentialSpec::minimizers(int dim) const {
  switch (kind) {
    case PotentialKind::zero: return {};
    case PotentialKind::power:
    case PotentialKind::shifted_power: return {center};
    case PotentialKind::multi_well: {
      std::vector<Point> out;
      for (const auto& w : wells) out.push_back(w.center);
      return out;
    }
    case PotentialKind::custom_table: {
      const auto& t = *table;
      std::size_t best = 0;
      for (std::size_t j = 1; j < t.size(); ++j)
        if (t[j] < t[best]) best = j;
      Point p = t.grid().position(best);
      if (dim == 1) p[1] = 0.0;
      return {p};
    }
  }
  return {};
}

double minimal_comparability_constant(const PotentialSpec& v, int dim) {
  switch (v.kind) {
    case PotentialKind::power: {
      const double r = std::max(1.0, radius(v.center, dim));
      return std::max(r, std::pow(r, v.b));
    }
    case PotentialKind::shifted_power: {
      const double r = std::max(1.0, radius(v.center, dim));
      return std::max(std::max(1.0, radius(v.center, dim) + v.r0), std::pow(r, v.b));
    }
    case PotentialKind::multi_well: {
      double rmax = 0.0;
      for (const auto& w : v.wells) rmax = std::max(rmax, radius(w.center, dim));
      const double r = std::max(1.0, rmax);
      return std::max({1.0, rmax, 1.0 / v.amplitude, v.amplitude * std::pow(r, v.growth())});
    }
    default: return 0.0;
  }
}

void ProblemSpec::validate() const {
  if (dim != 1 && dim != 2) throw DomainError("dim must be 1 or 2");
  if (grid.dim() != dim) throw DomainError("grid dimension differs from problem dimension");
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("gamma must be a finite real > 1");
  const double gc = gamma_conj();
  if (!(alpha > dim - gc && alpha < dim))
    throw DomainError("alpha = " + std::to_string(alpha) + " outside the mass-subcritical range (" +
                      std::to_string(dim - gc) + ", " + std::to_string(dim) + ")");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be positive");
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw DomainError("coupling must be >= 0");
  const auto& v = potential;
  if (!(v.value_scale > 0.0) || !(v.coord_scale > 0.0)) throw DomainError("potential frame scales must be positive");
  switch (v.kind) {
    case PotentialKind::zero: break;
    case PotentialKind::power:
    case PotentialKind::shifted_power:
      if (!(v.b > 0.0)) throw DomainError("potential exponent b must be positive");
      if (v.r0 < 0.0) throw DomainError("potential r0 must be >= 0");
      break;
    case PotentialKind::multi_well:
      if (v.wells.empty()) throw DomainError("multi_well potential needs at least one well");
      if (!(v.amplitude > 0.0)) throw DomainError("multi_well amplitude must be positive");
      for (const auto& w : v.wells)
        if (!(w.b > 0.0)) throw DomainError("well exponents must be positive");
      break;
    case PotentialKind::custom_table:
      if (!v.table) throw DomainError("custom_table potential has no table");
      if (v.table->grid().dim() != dim) throw DomainError("potential table dimension differs from problem");
      if (v.table->min() < 0.0) throw DomainError("potential table must be nonnegative");
      break;
  }
  if (v.C_V != 0.0) {
    const double need = minimal_comparability_constant(v, dim);
    if (v.C_V < need)
      throw DomainError("C_V = " + std::to_string(v.C_V) + " too small for the potential bounds (needs >= " +
                        std::to_string(need) + ")");
  }
}

ScalarField ProblemSpec::sample_potential() const {
  ScalarField v(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) v[j] = potential(grid.position(j), dim);
  return v;
}

}  // namespace mfglab
