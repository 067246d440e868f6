#include "mfglab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfglab/error.hpp"

namespace mfglab {

GridSpec::GridSpec(int dim, double half_width, int points_per_axis)
    : GridSpec(dim, Point{half_width, half_width}, points_per_axis) {}

GridSpec::GridSpec(int dim, Point half_width, int points_per_axis)
    : dim_(dim), half_width_(half_width), n_(points_per_axis) {
  if (dim != 1 && dim != 2) throw DomainError("grid dimension must be 1 or 2");
  if (points_per_axis < 16) throw DomainError("grid needs at least 16 points per axis");
  for (int a = 0; a < dim; ++a) {
    if (!(half_width[a] > 0.0) || !std::isfinite(half_width[a]))
      throw DomainError("grid half width must be positive and finite");
  }
  if (dim == 1) half_width_[1] = half_width_[0];
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= spacing(a);
  return v;
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim_; ++a) s *= static_cast<std::size_t>(n_);
  return s;
}

std::size_t GridSpec::stride(int axis) const {
  return (dim_ == 2 && axis == 0) ? static_cast<std::size_t>(n_) : 1;
}

std::array<int, 2> GridSpec::multi_index(std::size_t node) const {
  if (dim_ == 1) return {static_cast<int>(node), 0};
  return {static_cast<int>(node / n_), static_cast<int>(node % n_)};
}

Point GridSpec::position(std::size_t node) const {
  auto idx = multi_index(node);
  Point p{0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = coordinate(a, idx[a]);
  return p;
}

bool GridSpec::on_boundary(std::size_t node, int axis) const {
  int i = multi_index(node)[axis];
  return i == 0 || i == n_ - 1;
}

std::size_t GridSpec::center_node() const {
  if (n_ % 2 == 0) throw DomainError("grid has no node at the origin (even point count)");
  std::size_t c = 0;
  for (int a = 0; a < dim_; ++a) c += static_cast<std::size_t>((n_ - 1) / 2) * stride(a);
  return c;
}

bool GridSpec::operator==(const GridSpec& o) const {
  if (dim_ != o.dim_ || n_ != o.n_) return false;
  for (int a = 0; a < dim_; ++a)
    if (half_width_[a] != o.half_width_[a]) return false;
  return true;
}

ScalarField::ScalarField(const GridSpec& g, double value) : grid_(g), values_(g.size(), value) {}

ScalarField::ScalarField(const GridSpec& g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
  if (values_.size() != g.size())
    throw DomainError("field has " + std::to_string(values_.size()) + " values, grid has " +
                      std::to_string(g.size()) + " nodes");
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

VectorField::VectorField(const GridSpec& g) : grid_(g) {
  for (int a = 0; a < g.dim(); ++a) data_[a].assign(g.size(), 0.0);
}

double VectorField::norm(std::size_t node) const {
  double s = 0.0;
  for (int a = 0; a < components(); ++a) s += data_[a][node] * data_[a][node];
  return std::sqrt(s);
}

std::vector<double> trapezoid_weights(const GridSpec& g) {
  std::vector<double> w(g.size(), g.cell_volume());
  const int n = g.points();
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto idx = g.multi_index(j);
    for (int a = 0; a < g.dim(); ++a)
      if (idx[a] == 0 || idx[a] == n - 1) w[j] *= 0.5;
  }
  return w;
}

double integrate(const ScalarField& f) {
  const auto w = trapezoid_weights(f.grid());
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * f[j];
  return s;
}

VectorField gradient_upwind(const ScalarField& u, UpwindBias bias) {
  const GridSpec& g = u.grid();
  VectorField out(g);
  const int n = g.points();
  for (int a = 0; a < g.dim(); ++a) {
    const double h = g.spacing(a);
    const std::size_t s = g.stride(a);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const int i = g.multi_index(j)[a];
      double back, fwd;
      if (i == 0) {
        back = fwd = (u[j + s] - u[j]) / h;
      } else if (i == n - 1) {
        back = fwd = (u[j] - u[j - s]) / h;
      } else {
        back = (u[j] - u[j - s]) / h;
        fwd = (u[j + s] - u[j]) / h;
      }
      double p = 0.0;
      switch (bias) {
        case UpwindBias::backward: p = back; break;
        case UpwindBias::forward: p = fwd; break;
        case UpwindBias::central: p = 0.5 * (back + fwd); break;
        case UpwindBias::monotone_hjb: {
          const double bp = std::max(back, 0.0);
          const double fm = std::max(-fwd, 0.0);
          p = (bp >= fm) ? bp : -fm;
          break;
        }
      }
      out(a, j) = p;
    }
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const GridSpec& g = f.grid();
  ScalarField out(g);
  const int n = g.points();
  for (int a = 0; a < g.dim(); ++a) {
    const double h2 = g.spacing(a) * g.spacing(a);
    const std::size_t s = g.stride(a);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const int i = g.multi_index(j)[a];
      const double lo = (i == 0) ? f[j + s] : f[j - s];
      const double hi = (i == n - 1) ? f[j - s] : f[j + s];
      out[j] += (lo - 2.0 * f[j] + hi) / h2;
    }
  }
  return out;
}

ScalarField divergence(const VectorField& w) {
  const GridSpec& g = w.grid();
  const auto W = trapezoid_weights(g);
  const int n = g.points();
  ScalarField out(g);
  // out = -W^{-1} D^T W w with D the central gradient of gradient_upwind.
  for (int a = 0; a < g.dim(); ++a) {
    const double h = g.spacing(a);
    const std::size_t s = g.stride(a);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double y = W[j] * w(a, j);
      const int i = g.multi_index(j)[a];
      if (i == 0) {
        out[j + s] -= y / h;
        out[j] += y / h;
      } else if (i == n - 1) {
        out[j] -= y / h;
        out[j - s] += y / h;
      } else {
        out[j + s] -= 0.5 * y / h;
        out[j - s] += 0.5 * y / h;
      }
    }
  }
  for (std::size_t j = 0; j < g.size(); ++j) out[j] /= W[j];
  return out;
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm needs p >= 1");
  const auto W = trapezoid_weights(f.grid());
  double s = 0.0;
  for (std::size_t j = 0; j < W.size(); ++j) s += W[j] * std::pow(std::abs(f[j]), p);
  return std::pow(s, 1.0 / p);
}

namespace {

void lagrange4(const GridSpec& g, int axis, double x, int& base, std::array<double, 4>& wts) {
  const double h = g.spacing(axis);
  const int n = g.points();
  x = std::clamp(x, -g.half_width(axis), g.half_width(axis));
  double t = (x + g.half_width(axis)) / h;
  int i = static_cast<int>(std::floor(t));
  i = std::clamp(i, 1, n - 3);
  base = i - 1;
  const double s = t - i;  // position relative to node i, stencil nodes at -1,0,1,2
  wts[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
  wts[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  wts[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
  wts[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
}

}  // namespace

double interpolate_cubic(const ScalarField& f, const Point& x) {
  const GridSpec& g = f.grid();
  int b0, b1 = 0;
  std::array<double, 4> w0{}, w1{1.0, 0.0, 0.0, 0.0};
  lagrange4(g, 0, x[0], b0, w0);
  if (g.dim() == 1) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += w0[k] * f[static_cast<std::size_t>(b0 + k)];
    return s;
  }
  lagrange4(g, 1, x[1], b1, w1);
  const std::size_t n = static_cast<std::size_t>(g.points());
  double s = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      s += w0[k] * w1[l] * f[static_cast<std::size_t>(b0 + k) * n + static_cast<std::size_t>(b1 + l)];
  return s;
}

ScalarField shift_nodes(const ScalarField& f, const std::array<int, 2>& offset) {
  const GridSpec& g = f.grid();
  const int n = g.points();
  ScalarField out(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    auto idx = g.multi_index(j);
    std::size_t src = 0;
    for (int a = 0; a < g.dim(); ++a) {
      int i = std::clamp(idx[a] + offset[a], 0, n - 1);
      src += static_cast<std::size_t>(i) * g.stride(a);
    }
    out[j] = f[src];
  }
  return out;
}

double boundary_ratio(const ScalarField& f) {
  const GridSpec& g = f.grid();
  double top = 0.0, edge = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double v = std::abs(f[j]);
    top = std::max(top, v);
    for (int a = 0; a < g.dim(); ++a)
      if (g.on_boundary(j, a)) edge = std::max(edge, v);
  }
  return top > 0.0 ? edge / top : 0.0;
}

}  // namespace mfglab
