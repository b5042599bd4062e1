#include "opinionlab/loss.hpp"

#include <cmath>

#include "opinionlab/parallel.hpp"

namespace opinionlab {

EfficientAggregation efficient_weights(const Vector& sigma_sq) {
  if (sigma_sq.size() < 1 || sigma_sq.minCoeff() <= 0.0)
    throw InvalidSize("efficient_weights(): positive variances required");
  Vector prec = sigma_sq.cwiseInverse();
  const double total = prec.sum();
  return EfficientAggregation{prec / total, 1.0 / total};
}

namespace {

// min_q var(q . x_{-i}) under independent seeds.
double w_lower_star(const Vector& sigma_sq, int i) {
  double prec = 0.0;
  for (int k = 0; k < sigma_sq.size(); ++k)
    if (k != i) prec += 1.0 / sigma_sq(k);
  return 1.0 / prec;
}

}  // namespace

LossReport analytic_loss(const Network& net, const RuleProfile& rules, const NoiseSpec& noise,
                         const SignalModel& signal) {
  const int n = net.n;
  if (rules.n() != n) throw InvalidSize("analytic_loss(): rule length mismatch");
  const Vector sig = signal.sigma_sq_or_ones(n);

  LossReport rep;
  const EfficientAggregation eff = efficient_weights(sig);
  rep.pi_star = eff.pi_star;
  rep.v_star = eff.v_star;

  if (rules.m.maxCoeff() <= 0.0) {
    if (noise.persistent_variance > 0.0 || noise.idiosyncratic_variance > 0.0 ||
        noise.persistent_bias.size() != 0) {
      rep.diverged = true;  // no finite limit, loss unbounded
      return rep;
    }
    // Noiseless DG: consensus pi . x.
    const DGConsensus dg = dg_consensus(net, rules.gamma);
    const double L = dg.pi.cwiseAbs2().dot(sig);
    rep.L = Vector::Constant(n, L);
    rep.W = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    rep.delta_hat = rep.W;
    return rep;
  }

  // Limit decomposition: y - theta = P delta + E xi.
  const LongRunSolution sol =
      solve_longrun(net, rules.m, Vector::Zero(n), Vector::Zero(n));
  const Matrix cov = xi_covariance(noise, n, &net);
  const Vector bias = xi_mean(noise, n, &net);

  Vector V = Vector::Zero(n);
  if (noise.idiosyncratic_variance > 0.0) V = covariance_limit(net, rules, noise).V();

  rep.L = Vector(n);
  rep.W = Vector(n);
  rep.delta_hat = Vector(n);
  for (int i = 0; i < n; ++i) {
    const Vector p = sol.seed_weights.row(i);
    const Vector e = sol.error_weights.row(i);
    rep.L(i) = p.cwiseAbs2().dot(sig) + e.dot(cov * e) + std::pow(e.dot(bias), 2) + V(i);
    InfluenceDecomposition d = influence(net, rules.m, i, noise, sig);
    rep.W(i) = d.composite_variance;
    rep.delta_hat(i) = d.composite_variance - w_lower_star(sig, i);
  }
  return rep;
}

LossReport mc_loss(const Network& net, const RuleProfile& rules, const NoiseSpec& noise,
                   const SignalModel& signal, const McOptions& options) {
  const int n = net.n;
  if (options.replicas < 1) throw InvalidSize("mc_loss(): replicas >= 1 required");
  if (options.horizon == 0 && noise.idiosyncratic_variance > 0.0)
    throw InvalidSize("mc_loss(): idiosyncratic noise needs a fixed horizon");

  const long R = options.replicas;
  Matrix sq = Matrix::Zero(R, n);  // per-replica squared errors
  std::vector<long> bad(max_threads() + 1, 0);

  parallel_chunks(R, [&](int chunk, long lo, long hi) {
    for (long r = lo; r < hi; ++r) {
      const Realization real =
          sample_realization(signal, noise, n, options.seed + 0x9e3779b97f4a7c15ull * r, &net);
      RunOptions ro = options.run;
      if (options.horizon > 0) {
        ro.max_steps = options.horizon;
        ro.tol = 0.0;  // run the full horizon
        ro.detect_drift = false;
      }
      const Trajectory t = run(net, rules, real, Protocol::synchronous(), ro);
      const bool ok = options.horizon > 0 ? t.status != RunStatus::kDiverged
                                          : t.status == RunStatus::kConverged;
      if (!ok) {
        ++bad[chunk];
        sq.row(r).setConstant(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      for (int i = 0; i < n; ++i) sq(r, i) = std::pow(t.y(i) - real.theta, 2);
    }
  });

  LossReport rep;
  const EfficientAggregation eff = efficient_weights(signal.sigma_sq_or_ones(n));
  rep.pi_star = eff.pi_star;
  rep.v_star = eff.v_star;
  rep.replicas = R;
  for (long b : bad) rep.nonconverged += b;

  // Batch means over replicas (NaN rows from failed replicas dropped).
  const long B = std::min<long>(100, R);
  Vector mean = Vector::Zero(n), se = Vector::Zero(n);
  std::vector<Vector> batch_means;
  long used = 0;
  for (long b = 0; b < B; ++b) {
    const long lo = b * R / B, hi = (b + 1) * R / B;
    Vector acc = Vector::Zero(n);
    long cnt = 0;
    for (long r = lo; r < hi; ++r) {
      if (std::isnan(sq(r, 0))) continue;
      acc += sq.row(r).transpose();
      ++cnt;
    }
    if (cnt == 0) continue;
    batch_means.push_back(acc / cnt);
    mean += acc;
    used += cnt;
  }
  if (used == 0) throw NoConvergence("mc_loss(): every replica failed to converge");
  mean /= used;
  for (const Vector& bm : batch_means) se += (bm - mean).cwiseAbs2();
  const long nb = static_cast<long>(batch_means.size());
  se = (se / std::max<long>(1, nb - 1) / nb).cwiseSqrt();

  rep.L = mean;
  rep.std_err = se;
  rep.W = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  rep.delta_hat = rep.W;
  return rep;
}

LocusComparison locus_comparison(NetKind kind, int n, double m, double varpi) {
  Network net;
  switch (kind) {
    case NetKind::kComplete: net = make_complete(n); break;
    case NetKind::kDirectedCircle: net = make_directed_circle(n); break;
    case NetKind::kStar: net = make_star(n); break;
    default: throw UnsupportedNetwork("locus_comparison(): unsupported network kind");
  }
  const Vector mv = Vector::Constant(n, m);
  NoiseSpec processing;
  processing.persistent_variance = varpi;
  processing.locus = ErrorLocus::kProcessing;
  NoiseSpec expressing = processing;
  expressing.locus = ErrorLocus::kExpressing;

  LocusComparison cmp;
  cmp.omega_hat_processing = influence(net, mv, 0, processing).omega_hat;
  cmp.omega_hat_expressing = influence(net, mv, 0, expressing).omega_hat;
  return cmp;
}

}  // namespace opinionlab
