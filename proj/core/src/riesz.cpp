#include "mfglab/riesz.hpp"

#include <fftw3.h>

#include <cmath>
#include <functional>
#include <list>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "mfglab/error.hpp"

namespace mfglab {

namespace {

int nice_size(int minimum) {
  for (int p = minimum + (minimum % 2);; p += 2) {
    int r = p;
    for (int f : {2, 3, 5, 7})
      while (r % f == 0) r /= f;
    if (r == 1) return p;
  }
}

struct Plans {
  fftw_plan forward;
  fftw_plan backward;
};

// FFTW planning is not thread safe; execution on fresh arrays is.
std::mutex plan_mutex;

const Plans& plans_for(int dim, int p) {
  static std::map<std::pair<int, int>, Plans> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find({dim, p});
  if (it != cache.end()) return it->second;
  const std::size_t nreal = dim == 1 ? p : static_cast<std::size_t>(p) * p;
  const std::size_t ncplx = dim == 1 ? p / 2 + 1 : static_cast<std::size_t>(p) * (p / 2 + 1);
  double* in = fftw_alloc_real(nreal);
  fftw_complex* out = fftw_alloc_complex(ncplx);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans pl{};
  if (dim == 1) {
    pl.forward = fftw_plan_dft_r2c_1d(p, in, out, flags);
    pl.backward = fftw_plan_dft_c2r_1d(p, out, in, flags);
  } else {
    pl.forward = fftw_plan_dft_r2c_2d(p, p, in, out, flags);
    pl.backward = fftw_plan_dft_c2r_2d(p, p, out, in, flags);
  }
  fftw_free(in);
  fftw_free(out);
  return cache.emplace(std::make_pair(dim, p), pl).first->second;
}

std::size_t real_size(int dim, int p) { return dim == 1 ? p : static_cast<std::size_t>(p) * p; }
std::size_t complex_size(int dim, int p) {
  return dim == 1 ? p / 2 + 1 : static_cast<std::size_t>(p) * (p / 2 + 1);
}

void forward(int dim, int p, std::vector<double>& in, std::vector<std::complex<double>>& out) {
  const Plans& pl = plans_for(dim, p);
  fftw_execute_dft_r2c(pl.forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
}

void backward(int dim, int p, std::vector<std::complex<double>>& in, std::vector<double>& out) {
  const Plans& pl = plans_for(dim, p);
  fftw_execute_dft_c2r(pl.backward, reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Gauss-Legendre nodes/weights on [-1,1].
struct GaussRule {
  std::vector<double> x, w;
};

GaussRule gauss_legendre(int q) {
  GaussRule r;
  r.x.resize(q);
  r.w.resize(q);
  for (int i = 0; i < q; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= q; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = q * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        r.x[i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        break;
      }
    }
  }
  return r;
}

const GaussRule& rule(int q) {
  static const GaussRule r4 = gauss_legendre(4);
  static const GaussRule r8 = gauss_legendre(8);
  return q == 4 ? r4 : r8;
}

}  // namespace

double riesz_cell_average_1d(int k, double h, double alpha) {
  if (k == 0) return std::pow(h, alpha - 1.0) * std::pow(2.0, 1.0 - alpha) / alpha;
  const double kk = std::abs(static_cast<double>(k));
  // ((k+1/2)^a - (k-1/2)^a) h^{a-1} / a without cancellation.
  const double a = alpha * std::log1p(0.5 / kk);
  const double b = alpha * std::log1p(-0.5 / kk);
  const double diff = 2.0 * std::exp(0.5 * (a + b)) * std::sinh(0.5 * (a - b));
  return std::pow(kk * h, alpha) * diff / (alpha * h);
}

double riesz_cell_average_2d(int i, int j, double hx, double hy, double alpha) {
  if (i == 0 && j == 0) {
    const double tc = std::atan2(hy, hx);
    const double ax = 0.5 * hx, ay = 0.5 * hy;
    auto fx = [&](double t) { return std::pow(ax / std::cos(t), alpha); };
    auto fy = [&](double t) { return std::pow(ay / std::sin(t), alpha); };
    const double integral = simpson(fx, 0.0, tc, 1e-16) + simpson(fy, tc, 0.5 * std::numbers::pi, 1e-16);
    return 4.0 * integral / (alpha * hx * hy);
  }
  const int d = std::max(std::abs(i), std::abs(j));
  const int sub = d <= 2 ? 4 : (d <= 4 ? 2 : 1);
  const GaussRule& gr = rule(d <= 16 ? 8 : 4);
  const double x0 = (i - 0.5) * hx, y0 = (j - 0.5) * hy;
  const double sx = hx / sub, sy = hy / sub;
  const double e = 0.5 * (alpha - 2.0);
  double s = 0.0;
  for (int a = 0; a < sub; ++a)
    for (int b = 0; b < sub; ++b) {
      const double cx = x0 + (a + 0.5) * sx, cy = y0 + (b + 0.5) * sy;
      for (std::size_t p = 0; p < gr.x.size(); ++p)
        for (std::size_t q = 0; q < gr.x.size(); ++q) {
          const double x = cx + 0.5 * sx * gr.x[p], y = cy + 0.5 * sy * gr.x[q];
          s += gr.w[p] * gr.w[q] * std::pow(x * x + y * y, e);
        }
    }
  // Each sub-rule covers area sx*sy with weights summing to 4.
  return s * 0.25 / (sub * sub);
}

double RieszKernelTable::value(int k0, int k1) const {
  const int n = grid_.points();
  const std::size_t span = 2 * static_cast<std::size_t>(n) - 1;
  if (grid_.dim() == 1) return cells_[static_cast<std::size_t>(k0 + n - 1)];
  return cells_[static_cast<std::size_t>(k0 + n - 1) * span + static_cast<std::size_t>(k1 + n - 1)];
}

RieszKernelTable tabulate_kernel(const GridSpec& grid, double alpha) {
  if (!(alpha > 0.0 && alpha < grid.dim()))
    throw DomainError("Riesz order alpha must lie in (0, N)");
  RieszKernelTable t;
  t.alpha_ = alpha;
  t.grid_ = grid;
  const int n = grid.points();
  const int span = 2 * n - 1;
  const int dim = grid.dim();
  if (dim == 1) {
    t.cells_.resize(span);
    for (int k = -(n - 1); k <= n - 1; ++k)
      t.cells_[k + n - 1] = riesz_cell_average_1d(k, grid.spacing(0), alpha);
  } else {
    const double hx = grid.spacing(0), hy = grid.spacing(1);
    t.cells_.resize(static_cast<std::size_t>(span) * span);
    // Symmetric in both signs; compute one quadrant.
    for (int i = 0; i <= n - 1; ++i)
      for (int j = 0; j <= n - 1; ++j) {
        const double v = riesz_cell_average_2d(i, j, hx, hy, alpha);
        for (int si : {-1, 1})
          for (int sj : {-1, 1})
            t.cells_[static_cast<std::size_t>(si * i + n - 1) * span + (sj * j + n - 1)] = v;
      }
  }
  const int p = nice_size(span);
  t.padded_ = p;
  std::vector<double> padded(real_size(dim, p), 0.0);
  auto wrap = [p](int k) { return k < 0 ? k + p : k; };
  if (dim == 1) {
    for (int k = -(n - 1); k <= n - 1; ++k) padded[wrap(k)] = t.cells_[k + n - 1];
  } else {
    for (int i = -(n - 1); i <= n - 1; ++i)
      for (int j = -(n - 1); j <= n - 1; ++j)
        padded[static_cast<std::size_t>(wrap(i)) * p + wrap(j)] =
            t.cells_[static_cast<std::size_t>(i + n - 1) * span + (j + n - 1)];
  }
  t.spectrum_.assign(complex_size(dim, p), {0.0, 0.0});
  forward(dim, p, padded, t.spectrum_);
  return t;
}

std::shared_ptr<const RieszKernelTable> cached_kernel(const GridSpec& grid, double alpha) {
  struct Entry {
    GridSpec grid;
    double alpha;
    std::shared_ptr<const RieszKernelTable> table;
  };
  static std::mutex mtx;
  static std::list<Entry> cache;
  {
    std::lock_guard<std::mutex> lock(mtx);
    for (auto it = cache.begin(); it != cache.end(); ++it)
      if (it->grid == grid && it->alpha == alpha) {
        cache.splice(cache.begin(), cache, it);
        return cache.front().table;
      }
  }
  auto table = std::make_shared<const RieszKernelTable>(tabulate_kernel(grid, alpha));
  std::lock_guard<std::mutex> lock(mtx);
  cache.push_front({grid, alpha, table});
  if (cache.size() > 8) cache.pop_back();
  return table;
}

ScalarField convolve(const RieszKernelTable& kernel, const ScalarField& m) {
  const GridSpec& g = m.grid();
  if (g != kernel.grid()) throw DomainError("convolve: kernel grid does not match field grid");
  const int dim = g.dim(), n = g.points(), p = kernel.padded_points();
  const auto W = trapezoid_weights(g);
  std::vector<double> buf(real_size(dim, p), 0.0);
  if (dim == 1) {
    for (int i = 0; i < n; ++i) buf[i] = W[i] * m[i];
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t node = static_cast<std::size_t>(i) * n + j;
        buf[static_cast<std::size_t>(i) * p + j] = W[node] * m[node];
      }
  }
  std::vector<std::complex<double>> spec(complex_size(dim, p));
  forward(dim, p, buf, spec);
  const auto& ks = kernel.spectrum();
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= ks[k];
  backward(dim, p, spec, buf);
  const double scale = 1.0 / static_cast<double>(real_size(dim, p));
  ScalarField out(g);
  if (dim == 1) {
    for (int i = 0; i < n; ++i) out[i] = buf[i] * scale;
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i) * n + j] = buf[static_cast<std::size_t>(i) * p + j] * scale;
  }
  return out;
}

double interaction_energy(const RieszKernelTable& kernel, const ScalarField& a, const ScalarField& b) {
  const ScalarField kb = convolve(kernel, b);
  const auto W = trapezoid_weights(a.grid());
  double s = 0.0;
  for (std::size_t j = 0; j < W.size(); ++j) s += W[j] * a[j] * kb[j];
  return s;
}

double interaction_energy(const RieszKernelTable& kernel, const ScalarField& m) {
  for (std::size_t j = 0; j < m.size(); ++j)
    if (m[j] < -1e-12) throw DomainError("interaction_energy: density has negative entries");
  return interaction_energy(kernel, m, m);
}

}  // namespace mfglab
