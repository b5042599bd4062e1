#pragma once

#include "opinionlab/longrun.hpp"
#include "opinionlab/sim.hpp"

namespace opinionlab {

struct EfficientAggregation {
  Vector pi_star;  // precision weights, sum 1
  double v_star;   // variance of the efficient aggregate
};

/// pi*_k proportional to 1/sigma_k^2; v* = 1 / sum_k (1/sigma_k^2).
EfficientAggregation efficient_weights(const Vector& sigma_sq);

struct LossReport {
  Vector L;          // per-player expected loss E(y_i - theta)^2
  Vector W;          // composite variances (analytic path)
  Vector delta_hat;  // W_i - min_q var(q . x_{-i})
  Vector pi_star;
  double v_star = 0.0;
  bool diverged = false;  // all-DG with noise: no finite limit

  // Monte Carlo extras
  Vector std_err;
  long replicas = 0;
  long nonconverged = 0;
};

/// Exact loss from the linear limit decomposition plus the idiosyncratic
/// fluctuation variance; bias enters through the squared mean error term.
/// Reports diverged (no L) for all-DG profiles with any transmission noise.
LossReport analytic_loss(const Network& net, const RuleProfile& rules, const NoiseSpec& noise,
                         const SignalModel& signal);

struct McOptions {
  long replicas = 1000;
  long horizon = 0;  // 0: run to convergence (requires varpi0 = 0)
  std::uint64_t seed = 1;
  RunOptions run;
};

/// Monte Carlo estimate of the losses by simulating replicas to their limit
/// (or to a fixed horizon when idiosyncratic noise keeps opinions moving).
/// Standard errors via batch means over replicas.
LossReport mc_loss(const Network& net, const RuleProfile& rules, const NoiseSpec& noise,
                   const SignalModel& signal, const McOptions& options);

enum class NetKind { kComplete, kDirectedCircle, kStar };

struct LocusComparison {
  double omega_hat_processing = 0.0;
  double omega_hat_expressing = 0.0;
  double difference() const { return omega_hat_processing - omega_hat_expressing; }
};

/// Cumulated-error variances for the canonical networks under hearing-side
/// versus speaking-side persistent errors (both with per-player variance
/// varpi, independent draws). Player 0 (the hub for the star), symmetric m.
LocusComparison locus_comparison(NetKind kind, int n, double m, double varpi);

}  // namespace opinionlab
