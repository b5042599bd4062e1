#pragma once

#include <vector>

#include "opinionlab/rules.hpp"

namespace opinionlab {

/// Noiseless consensus when every player carries zero seed weight: all
/// opinions converge to pi . x, with pi the stationary vector of
/// B0 = I - Gamma + Gamma A.
struct DGConsensus {
  Vector pi;
  double consensus(const Vector& x) const { return pi.dot(x); }
  /// pi_i / (1 - pi_i), the controllable relative influence of each player.
  Vector relative_influence() const;
};

DGConsensus dg_consensus(const Network& net, const Vector& gamma);

/// Limit opinions under anchored dynamics, with the linear decomposition
/// y = seed_weights * x + error_weights * xi. seed_weights columns of players
/// with m = 0 are identically zero; rows sum to one.
struct LongRunSolution {
  Vector y;
  Matrix seed_weights;   // n x n, weight of seed x_j in y_i
  Matrix error_weights;  // n x n, coefficient of xi_j in y_i
  std::vector<int> dg_set;
};

/// Solves (I - (I-M)A) y = M x + (I-M) xi directly.
/// Throws AllDeGroot when m is identically zero, Singular if the solve fails.
LongRunSolution solve_longrun(const Network& net, const Vector& m, const Vector& x,
                              const Vector& xi);

/// Player-level decomposition y_i = p x_i + (1-p)(q . x_{-i} + xi_hat) with
/// xi_hat = h (xi_i + sum_j R_j (1-m_j) xi_j). The echo factor h quantifies
/// how much of the composite neighbor's opinion is i's own opinion returning.
/// When every other player has m_j = 0 the composite seed carries no weight
/// and the decomposition degenerates: prop5 is set, h and the composite
/// variance are infinite, and error_term_coeffs/error_term_var describe the
/// finite error term (1-m_i)/m_i * (xi_i + sum R_j xi_j) entering y_i.
struct InfluenceDecomposition {
  int player = 0;
  double own_seed_weight = 0.0;  // p_i
  Vector composite_weights;      // q, length n, zero at the player itself
  double echo = 1.0;             // h_i >= 1
  Vector r_weights;              // R, length n, zero at the player itself
  Vector xi_hat_coeffs;          // coefficients of xi_hat on (xi_1..xi_n)
  double composite_variance = 0.0;  // W_i = var(xhat) + omega_hat
  double xhat_var = 0.0;
  double omega_hat = 0.0;  // E xi_hat^2

  bool prop5 = false;
  Vector error_term_coeffs;    // coefficients of the error term in y_i (prop5 only)
  double error_term_var = 0.0; /// var of that error term per unit m-factor (prop5 only)
};

/// Throws Degenerate when m is identically zero.
InfluenceDecomposition influence(const Network& net, const Vector& m, int player,
                                 const NoiseSpec& noise, const Vector& sigma_sq = Vector());

/// Limit covariance of the opinion fluctuations eta = y - E y driven by
/// idiosyncratic noise: solves w = Lambda + B w B^T via the vectorized
/// n^2-dimensional linear system.
struct CovarianceLimit {
  Matrix w;
  Vector V() const { return w.diagonal(); }
};

CovarianceLimit covariance_limit(const Network& net, const RuleProfile& rules,
                                 const NoiseSpec& noise);

}  // namespace opinionlab
