#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <vector>

#include "mfglab/grid.hpp"

namespace mfglab {

// Controlled nearest-neighbour jump process on a grid. Along each axis a
// node jumps to its +/- neighbour with rates r+ / r-; at the box boundary
// the missing neighbour is mirrored, so both jumps go inward (reflection).
//
// The running cost of a control is
//   c(r) = sum_a [KL_a(r) - g_a(d_a)] + Lambda(d),   d_a = h_a (r+_a - r-_a),
// with KL_a(r) = 2 eps sum_{+-} (r log(r/rho_a) - r + rho_a), rho_a = eps/h_a^2,
// g_a(d) the minimum of KL_a over rate pairs with drift d, and
// Lambda(d) = |d|^{gamma'}/gamma' (sum_a g_a for gamma = 2). As h -> 0 the cost
// tends to |d|^{gamma'}/gamma' and the generator to eps Lap + d.grad. For
// gamma = 2 the cost is exactly sum_a KL_a, which makes the discrete
// Hopf-Cole transform exact. Boundary axes carry no drift.
class TransportPolicy {
 public:
  TransportPolicy() = default;
  TransportPolicy(const GridSpec& g, double epsilon, double gamma);

  const GridSpec& grid() const { return grid_; }
  double epsilon() const { return epsilon_; }
  double gamma() const { return gamma_; }

  std::vector<double>& rate_plus(int axis) { return rp_[axis]; }
  std::vector<double>& rate_minus(int axis) { return rm_[axis]; }
  const std::vector<double>& rate_plus(int axis) const { return rp_[axis]; }
  const std::vector<double>& rate_minus(int axis) const { return rm_[axis]; }
  // Node costs c_j; refreshed by update_cost().
  const std::vector<double>& cost() const { return cost_; }
  void update_cost();

  // Mean displacement rate d_a = h_a (r+ - r-); zero along boundary axes.
  VectorField drift() const;

  std::size_t plus_neighbor(std::size_t node, int axis) const;
  std::size_t minus_neighbor(std::size_t node, int axis) const;

  // (G phi)_j = sum_a r+ (phi_{j+} - phi_j) + r- (phi_{j-} - phi_j)
  std::vector<double> apply(const std::vector<double>& phi) const;
  // G^T mu
  std::vector<double> apply_adjoint(const std::vector<double>& mu) const;
  Eigen::SparseMatrix<double> generator() const;

 private:
  GridSpec grid_;
  double epsilon_ = 1.0;
  double gamma_ = 2.0;
  std::array<std::vector<double>, 2> rp_, rm_;
  std::vector<double> cost_;
};

struct OptimalControl {
  TransportPolicy policy;
  // H_j(u) = sup_r [-(G_r u)_j - c_j(r)], the discrete Hamiltonian.
  std::vector<double> hamiltonian;
};

// Per-node maximisation of -(G_r u)_j - c_j(r).
OptimalControl optimal_control(const GridSpec& g, double epsilon, double gamma, const ScalarField& u);

// Rates with prescribed drift and the cheapest split, r+ r- = rho^2.
// Along boundary axes the inward component of the drift sets a common
// inward rate.
TransportPolicy policy_from_drift(const VectorField& drift, double epsilon, double gamma);

// Rates r_{j->k} = rho exp(-(psi_k - psi_j)/(2 eps)); the stationary
// measure is exactly proportional to w_j exp(-psi_j/eps).
TransportPolicy gibbs_policy(const ScalarField& psi, double epsilon, double gamma);

// Scalar pieces of the cost, exposed for tests.
double kl_split_minimum(double d, double h, double epsilon);

}  // namespace mfglab
