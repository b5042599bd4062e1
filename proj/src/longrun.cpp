#include "opinionlab/longrun.hpp"

#include <cmath>
#include <limits>

namespace opinionlab {

Vector DGConsensus::relative_influence() const {
  Vector r(pi.size());
  for (int i = 0; i < pi.size(); ++i) r(i) = pi(i) / (1.0 - pi(i));
  return r;
}

DGConsensus dg_consensus(const Network& net, const Vector& gamma) {
  if (gamma.size() != net.n) throw InvalidSize("dg_consensus(): gamma length mismatch");
  const Vector rho = stationary_weights(net);  // throws NotStronglyConnected
  Vector pi = rho.cwiseQuotient(gamma);
  pi /= pi.sum();
  return DGConsensus{pi};
}

LongRunSolution solve_longrun(const Network& net, const Vector& m, const Vector& x,
                              const Vector& xi) {
  const int n = net.n;
  if (m.size() != n || x.size() != n || xi.size() != n)
    throw InvalidSize("solve_longrun(): vector length mismatch");
  if (m.maxCoeff() <= 0.0)
    throw AllDeGroot("solve_longrun(): no player anchors a seed (m = 0), no finite limit");

  const Matrix IM = (Vector::Ones(n) - m).asDiagonal();
  const Matrix K = Matrix::Identity(n, n) - IM * net.A;
  Eigen::PartialPivLU<Matrix> lu(K);
  const Matrix S = lu.inverse();
  if (!S.allFinite()) throw Singular("solve_longrun(): resolvent solve failed");

  LongRunSolution sol;
  sol.seed_weights = S * Matrix(m.asDiagonal());
  sol.error_weights = S * IM;
  sol.y = sol.seed_weights * x + sol.error_weights * xi;
  // Rows of seed_weights must sum to one; a gross violation signals a
  // numerically singular anchoring (e.g. anchored players unreachable).
  for (int i = 0; i < n; ++i) {
    if (std::abs(sol.seed_weights.row(i).sum() - 1.0) > 1e-6)
      throw Singular("solve_longrun(): seed weights do not aggregate, row " + std::to_string(i));
    if (m(i) == 0.0) sol.dg_set.push_back(i);
  }
  return sol;
}

InfluenceDecomposition influence(const Network& net, const Vector& m, int player,
                                 const NoiseSpec& noise, const Vector& sigma_sq) {
  const int n = net.n;
  if (m.size() != n) throw InvalidSize("influence(): m length mismatch");
  if (player < 0 || player >= n) throw InvalidSize("influence(): player out of range");
  double max_other = 0.0;
  for (int j = 0; j < n; ++j)
    if (j != player) max_other = std::max(max_other, m(j));
  if (max_other == 0.0 && m(player) == 0.0)
    throw Degenerate("influence(): all seed weights are zero");

  const Vector sig = sigma_sq.size() == 0 ? Vector::Ones(n) : sigma_sq;
  const Matrix cov = xi_covariance(noise, n, &net);
  const Vector bias = xi_mean(noise, n, &net);

  std::vector<int> idx;
  for (int j = 0; j < n; ++j)
    if (j != player) idx.push_back(j);
  const int k = n - 1;

  // Q = (I - (I-M)(I-alpha) Atilde)^{-1} over the other players, where
  // Atilde renormalizes their rows after removing the column of `player`.
  // (1-alpha) cancels the renormalization, so the product is just (1-m_k) A_kj;
  // a row pointing only at `player` (alpha = 1) drops out automatically.
  Matrix G = Matrix::Zero(k, k);
  for (int r = 0; r < k; ++r) {
    const int src = idx[r];
    for (int c = 0; c < k; ++c) G(r, c) = (1.0 - m(src)) * net.A(src, idx[c]);
  }
  Vector Ai(k);
  for (int c = 0; c < k; ++c) Ai(c) = net.A(player, idx[c]);
  // R_j = sum_k A_{i k} Q_{k j} needs only one transposed solve, not Q itself.
  const Vector R = (Matrix::Identity(k, k) - G).transpose().partialPivLu().solve(Ai);
  if (!R.allFinite()) throw Singular("influence(): resolvent solve failed");

  InfluenceDecomposition d;
  d.player = player;
  d.r_weights = Vector::Zero(n);
  for (int c = 0; c < k; ++c) d.r_weights(idx[c]) = R(c);

  double s = 0.0;
  for (int c = 0; c < k; ++c) s += R(c) * m(idx[c]);

  if (s <= 0.0) {
    // Every other player is pure DG: their seeds never enter, and i's loss is
    // sigma_i^2 plus the cumulated-error term scaled by ((1-m_i)/m_i)^2.
    d.prop5 = true;
    d.echo = std::numeric_limits<double>::infinity();
    d.own_seed_weight = 1.0;
    d.composite_weights = Vector::Zero(n);
    d.xi_hat_coeffs = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    d.composite_variance = std::numeric_limits<double>::infinity();
    d.omega_hat = std::numeric_limits<double>::infinity();
    d.xhat_var = 0.0;
    Vector c = Vector::Zero(n);
    c(player) = 1.0;
    for (int q = 0; q < k; ++q) c(idx[q]) += R(q);
    d.error_term_coeffs = c;
    d.error_term_var = c.dot(cov * c) + std::pow(c.dot(bias), 2);
    return d;
  }

  d.echo = 1.0 / s;
  const double mi = m(player);
  const double ratio = mi >= 1.0 ? std::numeric_limits<double>::infinity()
                                 : mi * d.echo / (1.0 - mi);
  d.own_seed_weight = std::isinf(ratio) ? 1.0 : ratio / (1.0 + ratio);

  d.composite_weights = Vector::Zero(n);
  for (int c = 0; c < k; ++c) d.composite_weights(idx[c]) = R(c) * m(idx[c]) / s;

  d.xi_hat_coeffs = Vector::Zero(n);
  d.xi_hat_coeffs(player) = d.echo;
  for (int c = 0; c < k; ++c)
    d.xi_hat_coeffs(idx[c]) = d.echo * R(c) * (1.0 - m(idx[c]));

  d.xhat_var = 0.0;
  for (int c = 0; c < k; ++c)
    d.xhat_var += d.composite_weights(idx[c]) * d.composite_weights(idx[c]) * sig(idx[c]);
  d.omega_hat = d.xi_hat_coeffs.dot(cov * d.xi_hat_coeffs) +
                std::pow(d.xi_hat_coeffs.dot(bias), 2);
  d.composite_variance = d.xhat_var + d.omega_hat;
  return d;
}

CovarianceLimit covariance_limit(const Network& net, const RuleProfile& rules,
                                 const NoiseSpec& noise) {
  const int n = net.n;
  if (rules.n() != n) throw InvalidSize("covariance_limit(): rule length mismatch");
  if (rules.m.maxCoeff() <= 0.0)
    throw AllDeGroot("covariance_limit(): fluctuations are unbounded under all-DG rules");
  const double varpi0 = noise.idiosyncratic_variance;

  const Vector g = rules.gamma, m = rules.m;
  const Matrix B = Matrix::Identity(n, n) - Matrix(g.asDiagonal()) +
                   Matrix(g.asDiagonal()) * Matrix((Vector::Ones(n) - m).asDiagonal()) * net.A;

  // Row-major vec of w: index (i, j) -> i*n + j. (Bbar)_{ij,hk} = B_ih B_jk.
  const int N2 = n * n;
  Matrix sys = Matrix::Identity(N2, N2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int h = 0; h < n; ++h)
        for (int kk = 0; kk < n; ++kk) sys(i * n + j, h * n + kk) -= B(i, h) * B(j, kk);
  Vector lam = Vector::Zero(N2);
  for (int i = 0; i < n; ++i)
    lam(i * n + i) = std::pow(g(i) * (1.0 - m(i)), 2) * varpi0;

  const Vector wv = sys.partialPivLu().solve(lam);
  if (!wv.allFinite()) throw Singular("covariance_limit(): vectorized solve failed");
  CovarianceLimit out;
  out.w = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.w(i, j) = wv(i * n + j);
  return out;
}

}  // namespace opinionlab
