#include "mfglab/transport.hpp"

#include <algorithm>
#include <cmath>

#include "mfglab/error.hpp"

namespace mfglab {

namespace {

// r log(r/rho) - r + rho, written around r = rho to avoid cancellation.
double kl_term(double r, double rho) {
  if (r <= 0.0) return rho;
  const double t = (r - rho) / rho;
  if (std::abs(t) > 0.5) return r * std::log(r / rho) - r + rho;
  return rho * ((1.0 + t) * std::log1p(t) - t);
}

double kl_pair(double rp, double rm, double rho, double eps) {
  return 2.0 * eps * (kl_term(rp, rho) + kl_term(rm, rho));
}

struct Axis {
  double dp = 0.0, dm = 0.0;  // u(neighbour) - u(node)
  bool boundary = false;
  double h = 1.0, rho = 1.0;
  // derived for free axes
  double sp = 1.0;  // sqrt of the optimal split product / rho^2
  double q = 0.0;   // (dm - dp) / (2h)
  double z = 0.0;   // h / (2 eps)
};

struct NodeSolver {
  double eps, gc;
  Axis ax[2];
  int dim;
  int free_axes[2];
  int nfree = 0;

  double a_pi(const Axis& a, double d) const { return std::asinh(a.z * d / a.sp); }

  double psi(const Axis& a, double d) const {
    const double ap = a_pi(a, d);
    const double rp = a.rho * a.sp * std::exp(ap), rm = a.rho * a.sp * std::exp(-ap);
    return -rp * a.dp - rm * a.dm - kl_pair(rp, rm, a.rho, eps);
  }

  double dnorm(const double* d) const {
    double s = 0.0;
    for (int k = 0; k < nfree; ++k) s += d[k] * d[k];
    return std::sqrt(s);
  }

  double objective(const double* d) const {
    double s = 0.0;
    for (int k = 0; k < nfree; ++k) {
      const Axis& a = ax[free_axes[k]];
      s += psi(a, d[k]) + kl_split_minimum(d[k], a.h, eps);
    }
    return s - std::pow(dnorm(d), gc) / gc;
  }

  void gradient(const double* d, double* g) const {
    const double dn = dnorm(d);
    const double lp = dn > 0.0 ? std::pow(dn, gc - 2.0) : 0.0;
    for (int k = 0; k < nfree; ++k) {
      const Axis& a = ax[free_axes[k]];
      const double c1 = 2.0 * eps / a.h;
      const double a0 = std::asinh(a.z * d[k]);
      g[k] = a.q - c1 * (a_pi(a, d[k]) - a0) - lp * d[k];
    }
  }

  void hessian(const double* d, double H[2][2]) const {
    const double dn = dnorm(d);
    const double l2 = dn > 0.0 ? std::pow(dn, gc - 2.0) : (gc < 2.0 ? 1e300 : (gc == 2.0 ? 1.0 : 0.0));
    const double l4 = dn > 0.0 ? (gc - 2.0) * std::pow(dn, gc - 4.0) : 0.0;
    for (int k = 0; k < nfree; ++k) {
      const Axis& a = ax[free_axes[k]];
      const double t = a.z * d[k];
      const double zeta = t / a.sp;
      H[k][k] = -1.0 / (a.sp * std::sqrt(1.0 + zeta * zeta)) + 1.0 / std::sqrt(1.0 + t * t) - l2;
    }
    for (int k = 0; k < nfree; ++k)
      for (int l = 0; l < nfree; ++l) {
        if (k != l) H[k][l] = 0.0;
        H[k][l] -= l4 * d[k] * d[l];
      }
  }

  // One free axis: bracketed Newton on the derivative.
  double solve_1d() const {
    const Axis& a = ax[free_axes[0]];
    if (a.q == 0.0) return 0.0;
    auto F = [&](double d) {
      double g;
      gradient(&d, &g);
      return g;
    };
    const double s = a.q > 0.0 ? 1.0 : -1.0;
    const double guess = std::pow(std::abs(a.q), 1.0 / (gc - 1.0));
    double lo = 0.0, hi = std::max(2.0 * guess, 1e-300);
    for (int k = 0; k < 2000 && s * F(s * hi) > 0.0; ++k) {
      lo = hi;
      hi *= 2.0;
    }
    double x = std::clamp(guess, lo, hi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double fx = s * F(s * x);
      if (fx == 0.0) break;
      if (fx > 0.0)
        lo = x;
      else
        hi = x;
      double H[2][2];
      const double sd = s * x;
      hessian(&sd, H);
      double nx = x - fx / H[0][0];  // derivative of s F(s x) wrt x is H
      if (!(nx > lo && nx < hi) || !std::isfinite(nx)) nx = 0.5 * (lo + hi);
      if (std::abs(nx - x) <= 4e-16 * std::abs(x) || hi - lo <= 4e-16 * hi) {
        x = nx;
        break;
      }
      x = nx;
    }
    return s * x;
  }

  void solve_2d(double* d) const {
    const double qn = std::hypot(ax[0].q, ax[1].q);
    if (qn == 0.0) {
      d[0] = d[1] = 0.0;
      return;
    }
    const double scale = std::pow(qn, 1.0 / (gc - 1.0)) / qn;
    d[0] = ax[0].q * scale;
    d[1] = ax[1].q * scale;
    double g[2];
    gradient(d, g);
    double phi = objective(d);
    for (int it = 0; it < 200; ++it) {
      const double gn = std::hypot(g[0], g[1]);
      if (gn <= 1e-14 * (1.0 + qn)) return;
      double H[2][2];
      hessian(d, H);
      const double det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
      double step[2];
      if (H[0][0] < 0.0 && det > 0.0 && std::isfinite(det)) {
        step[0] = -(H[1][1] * g[0] - H[0][1] * g[1]) / det;
        step[1] = -(-H[1][0] * g[0] + H[0][0] * g[1]) / det;
      } else {
        const double c = 1.0 / (std::max(std::abs(H[0][0]), std::abs(H[1][1])) + 1.0);
        step[0] = c * g[0];
        step[1] = c * g[1];
      }
      const double slope = g[0] * step[0] + g[1] * step[1];
      double t = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        double nd[2] = {d[0] + t * step[0], d[1] + t * step[1]};
        const double nphi = objective(nd);
        double ng[2];
        gradient(nd, ng);
        if (nphi >= phi + 1e-4 * t * slope || std::hypot(ng[0], ng[1]) < (1.0 - 1e-4 * t) * gn) {
          d[0] = nd[0];
          d[1] = nd[1];
          g[0] = ng[0];
          g[1] = ng[1];
          phi = nphi;
          accepted = true;
          break;
        }
      }
      if (!accepted) return;
    }
  }
};

}  // namespace

double kl_split_minimum(double d, double h, double epsilon) {
  const double rho = epsilon / (h * h);
  const double t = h * d / (2.0 * epsilon);
  const double a0 = std::asinh(t);
  return 4.0 * epsilon * rho * (a0 * t - t * t / (std::sqrt(1.0 + t * t) + 1.0));
}

TransportPolicy::TransportPolicy(const GridSpec& g, double epsilon, double gamma)
    : grid_(g), epsilon_(epsilon), gamma_(gamma) {
  for (int a = 0; a < g.dim(); ++a) {
    rp_[a].assign(g.size(), 0.0);
    rm_[a].assign(g.size(), 0.0);
  }
  cost_.assign(g.size(), 0.0);
}

std::size_t TransportPolicy::plus_neighbor(std::size_t node, int axis) const {
  const int i = grid_.multi_index(node)[axis];
  const std::size_t s = grid_.stride(axis);
  return i == grid_.points() - 1 ? node - s : node + s;
}

std::size_t TransportPolicy::minus_neighbor(std::size_t node, int axis) const {
  const int i = grid_.multi_index(node)[axis];
  const std::size_t s = grid_.stride(axis);
  return i == 0 ? node + s : node - s;
}

void TransportPolicy::update_cost() {
  const double gc = gamma_ / (gamma_ - 1.0);
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    double sum = 0.0, d2 = 0.0;
    for (int a = 0; a < grid_.dim(); ++a) {
      const double h = grid_.spacing(a), rho = epsilon_ / (h * h);
      const double kl = kl_pair(rp_[a][j], rm_[a][j], rho, epsilon_);
      if (gamma_ == 2.0 || grid_.on_boundary(j, a)) {
        sum += kl;
        continue;
      }
      const double d = h * (rp_[a][j] - rm_[a][j]);
      sum += kl - kl_split_minimum(d, h, epsilon_);
      d2 += d * d;
    }
    if (gamma_ != 2.0 && d2 > 0.0) sum += std::pow(d2, 0.5 * gc) / gc;
    cost_[j] = sum;
  }
}

VectorField TransportPolicy::drift() const {
  VectorField d(grid_);
  for (int a = 0; a < grid_.dim(); ++a) {
    const double h = grid_.spacing(a);
    for (std::size_t j = 0; j < grid_.size(); ++j)
      d(a, j) = grid_.on_boundary(j, a) ? 0.0 : h * (rp_[a][j] - rm_[a][j]);
  }
  return d;
}

std::vector<double> TransportPolicy::apply(const std::vector<double>& phi) const {
  std::vector<double> out(grid_.size(), 0.0);
  for (int a = 0; a < grid_.dim(); ++a)
    for (std::size_t j = 0; j < grid_.size(); ++j)
      out[j] += rp_[a][j] * (phi[plus_neighbor(j, a)] - phi[j]) + rm_[a][j] * (phi[minus_neighbor(j, a)] - phi[j]);
  return out;
}

std::vector<double> TransportPolicy::apply_adjoint(const std::vector<double>& mu) const {
  std::vector<double> out(grid_.size(), 0.0);
  for (int a = 0; a < grid_.dim(); ++a)
    for (std::size_t j = 0; j < grid_.size(); ++j) {
      const double fp = rp_[a][j] * mu[j], fm = rm_[a][j] * mu[j];
      out[plus_neighbor(j, a)] += fp;
      out[minus_neighbor(j, a)] += fm;
      out[j] -= fp + fm;
    }
  return out;
}

Eigen::SparseMatrix<double> TransportPolicy::generator() const {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(grid_.size() * (2 * grid_.dim() + 1));
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    double diag = 0.0;
    for (int a = 0; a < grid_.dim(); ++a) {
      const auto r = static_cast<Eigen::Index>(j);
      trip.emplace_back(r, static_cast<Eigen::Index>(plus_neighbor(j, a)), rp_[a][j]);
      trip.emplace_back(r, static_cast<Eigen::Index>(minus_neighbor(j, a)), rm_[a][j]);
      diag -= rp_[a][j] + rm_[a][j];
    }
    trip.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j), diag);
  }
  Eigen::SparseMatrix<double> G(n, n);
  G.setFromTriplets(trip.begin(), trip.end());
  return G;
}

OptimalControl optimal_control(const GridSpec& g, double epsilon, double gamma, const ScalarField& u) {
  OptimalControl out{TransportPolicy(g, epsilon, gamma), std::vector<double>(g.size(), 0.0)};
  TransportPolicy& pol = out.policy;
  const double gc = gamma / (gamma - 1.0);
  const int dim = g.dim();
  for (std::size_t j = 0; j < g.size(); ++j) {
    NodeSolver ns{epsilon, gc, {}, dim, {0, 0}, 0};
    for (int a = 0; a < dim; ++a) {
      Axis& ax = ns.ax[a];
      ax.h = g.spacing(a);
      ax.rho = epsilon / (ax.h * ax.h);
      ax.dp = u[pol.plus_neighbor(j, a)] - u[j];
      ax.dm = u[pol.minus_neighbor(j, a)] - u[j];
      ax.boundary = g.on_boundary(j, a);
      ax.sp = std::exp(-(ax.dp + ax.dm) / (4.0 * epsilon));
      ax.q = (ax.dm - ax.dp) / (2.0 * ax.h);
      ax.z = ax.h / (2.0 * epsilon);
      if (!ax.boundary) ns.free_axes[ns.nfree++] = a;
    }
    double d[2] = {0.0, 0.0};
    if (gamma != 2.0 && ns.nfree == 1) d[0] = ns.solve_1d();
    if (gamma != 2.0 && ns.nfree == 2) ns.solve_2d(d);
    double transport = 0.0;
    for (int a = 0; a < dim; ++a) {
      const Axis& ax = ns.ax[a];
      double rp, rm;
      if (gamma == 2.0) {
        rp = ax.rho * std::exp(-ax.dp / (2.0 * epsilon));
        rm = ax.rho * std::exp(-ax.dm / (2.0 * epsilon));
      } else {
        double da = 0.0;
        for (int k = 0; k < ns.nfree; ++k)
          if (ns.free_axes[k] == a) da = d[k];
        const double ap = ns.a_pi(ax, da);
        rp = ax.rho * ax.sp * std::exp(ap);
        rm = ax.rho * ax.sp * std::exp(-ap);
      }
      if (!std::isfinite(rp) || !std::isfinite(rm))
        throw NumericalError("transport rates overflow; epsilon too small for the grid spacing");
      pol.rate_plus(a)[j] = rp;
      pol.rate_minus(a)[j] = rm;
      transport += rp * ax.dp + rm * ax.dm;
    }
    out.hamiltonian[j] = -transport;  // cost subtracted below
  }
  pol.update_cost();
  for (std::size_t j = 0; j < g.size(); ++j) out.hamiltonian[j] -= pol.cost()[j];
  return out;
}

TransportPolicy policy_from_drift(const VectorField& drift, double epsilon, double gamma) {
  const GridSpec& g = drift.grid();
  TransportPolicy pol(g, epsilon, gamma);
  const int n = g.points();
  for (int a = 0; a < g.dim(); ++a) {
    const double h = g.spacing(a), rho = epsilon / (h * h), z = h / (2.0 * epsilon);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const int i = g.multi_index(j)[a];
      double rp, rm;
      if (i == 0 || i == n - 1) {
        const double inward = i == 0 ? drift(a, j) : -drift(a, j);
        rp = rm = rho * std::exp(std::asinh(z * inward));
      } else {
        const double a0 = std::asinh(z * drift(a, j));
        rp = rho * std::exp(a0);
        rm = rho * std::exp(-a0);
      }
      pol.rate_plus(a)[j] = rp;
      pol.rate_minus(a)[j] = rm;
    }
  }
  pol.update_cost();
  return pol;
}

TransportPolicy gibbs_policy(const ScalarField& psi, double epsilon, double gamma) {
  const GridSpec& g = psi.grid();
  TransportPolicy pol(g, epsilon, gamma);
  for (int a = 0; a < g.dim(); ++a) {
    const double h = g.spacing(a), rho = epsilon / (h * h);
    for (std::size_t j = 0; j < g.size(); ++j) {
      pol.rate_plus(a)[j] = rho * std::exp(-(psi[pol.plus_neighbor(j, a)] - psi[j]) / (2.0 * epsilon));
      pol.rate_minus(a)[j] = rho * std::exp(-(psi[pol.minus_neighbor(j, a)] - psi[j]) / (2.0 * epsilon));
    }
  }
  pol.update_cost();
  return pol;
}

}  // namespace mfglab
