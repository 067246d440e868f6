#include "mfglab/choquard.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "mfglab/error.hpp"
#include "mfglab/mfg.hpp"
#include "mfglab/riesz.hpp"

namespace mfglab {

namespace {

struct Parts {
  double dirichlet = 0.0;  // <v, -Lap v>
  double potential = 0.0;
  double interaction = 0.0;
  ScalarField lap, kv2;
};

class Functional {
 public:
  explicit Functional(const ProblemSpec& spec)
      : spec_(spec), W_(trapezoid_weights(spec.grid)), V_(spec.sample_potential()) {
    if (spec.coupling != 0.0) K_ = cached_kernel(spec.grid, spec.alpha);
  }

  const std::vector<double>& weights() const { return W_; }

  Parts parts(const ScalarField& v) const {
    Parts p;
    p.lap = laplacian(v);
    ScalarField v2(v.grid());
    for (std::size_t j = 0; j < v.size(); ++j) v2[j] = v[j] * v[j];
    p.kv2 = K_ ? convolve(*K_, v2) : ScalarField(v.grid());
    for (std::size_t j = 0; j < v.size(); ++j) {
      p.kv2[j] *= spec_.coupling;
      p.dirichlet -= W_[j] * v[j] * p.lap[j];
      p.potential += W_[j] * V_[j] * v2[j];
      p.interaction += W_[j] * v2[j] * p.kv2[j];
    }
    return p;
  }

  double energy(const Parts& p) const {
    const double e2 = spec_.epsilon * spec_.epsilon;
    return 2.0 * e2 * p.dirichlet + p.potential - 0.5 * p.interaction;
  }

  // -2 eps^2 Lap v + (V - K * v^2) v
  std::vector<double> operator_apply(const ScalarField& v, const Parts& p) const {
    const double e2 = spec_.epsilon * spec_.epsilon;
    std::vector<double> a(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) a[j] = -2.0 * e2 * p.lap[j] + (V_[j] - p.kv2[j]) * v[j];
    return a;
  }

 private:
  const ProblemSpec& spec_;
  std::vector<double> W_;
  ScalarField V_;
  std::shared_ptr<const RieszKernelTable> K_;
};

double dot(const std::vector<double>& W, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < W.size(); ++j) s += W[j] * a[j] * b[j];
  return s;
}

void project_mass(const std::vector<double>& W, ScalarField& v, double mass) {
  const double s = std::sqrt(mass / dot(W, v.values(), v.values()));
  for (auto& x : v.values()) x *= s;
}

class Preconditioner {
 public:
  Preconditioner(const ProblemSpec& spec, double shift) {
    const GridSpec& g = spec.grid;
    const auto n = static_cast<Eigen::Index>(g.size());
    const ScalarField V = spec.sample_potential();
    const double e2 = 2.0 * spec.epsilon * spec.epsilon;
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto r = static_cast<Eigen::Index>(j);
      double diag = std::max(V[j], 0.0) + shift;
      const auto idx = g.multi_index(j);
      for (int a = 0; a < g.dim(); ++a) {
        const double c = e2 / (g.spacing(a) * g.spacing(a));
        const std::size_t s = g.stride(a);
        const int i = idx[a];
        const std::size_t lo = i == 0 ? j + s : j - s;
        const std::size_t hi = i == g.points() - 1 ? j - s : j + s;
        trip.emplace_back(r, static_cast<Eigen::Index>(lo), -c);
        trip.emplace_back(r, static_cast<Eigen::Index>(hi), -c);
        diag += 2.0 * c;
      }
      trip.emplace_back(r, r, diag);
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    lu_.compute(A);
    if (lu_.info() != Eigen::Success) throw NumericalError("Choquard preconditioner is singular");
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXd x = lu_.solve(rhs);
    return {x.data(), x.data() + x.size()};
  }

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

ScalarField initial_profile(const ProblemSpec& spec) {
  const GridSpec& g = spec.grid;
  const double gc = spec.gamma_conj();
  double hmax = 0.0, rmin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.dim(); ++a) {
    hmax = std::max(hmax, g.spacing(a));
    rmin = std::min(rmin, g.half_width(a));
  }
  const double width =
      std::clamp(std::pow(spec.epsilon, gc / (gc - spec.dim + spec.alpha)), 4.0 * hmax, rmin / 4.0);
  Point c{0.0, 0.0};
  const auto mins = spec.potential.minimizers(g.dim());
  if (!mins.empty()) {
    // Minimiser of V0 mapped back through the frame of the spec.
    for (int a = 0; a < g.dim(); ++a)
      c[a] = std::clamp(mins.front()[a] / spec.potential.coord_scale - spec.potential.shift[a],
                        -0.5 * g.half_width(a), 0.5 * g.half_width(a));
  }
  ScalarField v(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Point x = g.position(j);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
    // Floor keeps v bounded away from zero in the far field.
    v[j] = std::exp(-0.5 * r2 / (width * width)) + std::exp(-std::sqrt(r2) / width);
  }
  return v;
}

}  // namespace

ScalarField ChoquardState::density() const {
  ScalarField m(v.grid());
  for (std::size_t j = 0; j < v.size(); ++j) m[j] = v[j] * v[j];
  return m;
}

double choquard_energy(const ProblemSpec& spec, const ScalarField& v) {
  const Functional F(spec);
  return F.energy(F.parts(v));
}

ChoquardState solve_choquard(const ProblemSpec& spec, const ChoquardOptions& options) {
  spec.validate();
  if (spec.gamma != 2.0) throw DomainError("the Hopf-Cole solver needs gamma = 2");
  const Functional F(spec);
  const auto& W = F.weights();
  const std::size_t n = spec.grid.size();

  ScalarField v = initial_profile(spec);
  project_mass(W, v, spec.mass);
  Parts p = F.parts(v);
  double e = F.energy(p);

  // Sobolev preconditioner (-2 eps^2 Lap + V + c)^{-1}, c bounding the
  // initial attraction.
  const double shift = 1.0 + p.kv2.max();
  const Preconditioner P(spec, shift);

  std::vector<double> d(n), d_old, v_old;
  double step = 1.0;
  ChoquardState st;
  auto finish = [&](double mu, double res, int it) {
    st.v = std::move(v);
    st.mu = mu;
    st.energy = e;
    st.residual = res;
    st.iterations = it;
    return st;
  };
  for (int it = 0; it < options.max_iters; ++it) {
    const auto a = F.operator_apply(v, p);
    const double mu = dot(W, a, v.values()) / spec.mass;
    double res = 0.0;
    for (std::size_t j = 0; j < n; ++j) res = std::max(res, std::abs(a[j] - mu * v[j]));
    if (res <= options.tol * v.max()) return finish(mu, res, it);

    const auto z = P.solve(a);
    const auto y = P.solve(v.values());
    const double c = dot(W, v.values(), z) / dot(W, v.values(), y);
    for (std::size_t j = 0; j < n; ++j) d[j] = z[j] - c * y[j];
    const double slope = 2.0 * dot(W, a, d);
    if (it > 0) {
      std::vector<double> sv(n), dd(n);
      for (std::size_t j = 0; j < n; ++j) {
        sv[j] = v[j] - v_old[j];
        dd[j] = d[j] - d_old[j];
      }
      const double sd = dot(W, sv, dd), ddd = dot(W, dd, dd);
      step = sd < 0.0 && ddd > 0.0 ? std::min(-sd / ddd, 4.0) : 1.0;
    }
    v_old = v.values();
    d_old = d;
    bool accepted = false;
    for (; step >= 1e-12; step *= 0.5) {
      ScalarField trial(spec.grid);
      bool positive = true;
      for (std::size_t j = 0; j < n && positive; ++j) {
        trial[j] = v[j] - step * d[j];
        positive = trial[j] > 0.0;
      }
      if (!positive) continue;
      project_mass(W, trial, spec.mass);
      Parts tp = F.parts(trial);
      const double te = F.energy(tp);
      const bool armijo = te <= e - 1e-4 * step * slope;
      // Near the minimiser the decrease drops below round-off in e.
      const bool flat = te <= e + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(e) &&
                        step * slope <= 1e-12 * std::abs(e);
      if (armijo || flat) {
        v = std::move(trial);
        p = std::move(tp);
        e = std::min(e, te);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw ConvergenceError("Choquard flow: step size collapsed below 1e-12", res, it);
    if (v.min() <= 0.0) throw NumericalError("Choquard flow lost positivity");
  }
  throw ConvergenceError("Choquard flow did not converge", 0.0, options.max_iters);
}

double hopf_cole_roundtrip(const ProblemSpec& spec, const MFGSolution& sol) {
  const Functional F(spec);
  const auto& W = F.weights();
  ScalarField v(sol.u.grid());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::exp(-sol.u[j] / (2.0 * spec.epsilon));
  project_mass(W, v, spec.mass);
  const Parts p = F.parts(v);
  const auto a = F.operator_apply(v, p);
  double r = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) r = std::max(r, std::abs(a[j] - sol.lambda * v[j]));
  return r;
}

}  // namespace mfglab
