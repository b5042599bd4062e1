#pragma once

#include <string>
#include <vector>

#include "opinionlab/loss.hpp"

namespace opinionlab {

/// Optimal seed weight for one player against fixed m_others (entry `player`
/// of m is ignored): m/(1-m) = W / (h sigma_i^2), clamped to [0,1]. When every
/// other player is pure DG the loss is strictly decreasing in m_i and the
/// maximizing anchor is m_i = 1.
double best_response(const Network& net, const Vector& m, const NoiseSpec& noise,
                     const SignalModel& signal, int player);

struct EquilibriumResult {
  Vector m_star;
  Vector m0_view;  // convenience alias of m_star(0) for star reductions
  int iterations = 0;
  double residual = 0.0;
  LossReport losses;
  bool dg_boundary = false;  // noiseless game: equilibrium is DG (m = 0)
};

struct NashOptions {
  Vector m_init;         // empty: 0.1 everywhere
  double damping = 0.5;  // m <- (1-damping) m + damping BR(m)
  double tol = 1e-10;
  long max_iterations = 100'000;
  enum class Mode { kFullVector, kSymmetricScalar, kStarTwoVar } mode = Mode::kFullVector;
};

/// Damped simultaneous best-response iteration. Symmetric reductions solve a
/// scalar (or hub/spoke two-variable) fixed point instead. Throws
/// NoConvergence with the residual trace tail on failure. For varpi = 0 a
/// DG-boundary result is reported (no interior equilibrium exists).
EquilibriumResult nash_solve(const Network& net, const NoiseSpec& noise,
                             const SignalModel& signal, const NashOptions& options = {});

struct SocialOptimum {
  Vector m;
  double total_loss = 0.0;
};

/// Minimizes the total analytic loss by golden-section search on the
/// symmetric diagonal, or multi-start coordinate descent for asymmetric
/// profiles. Local optimality only.
SocialOptimum social_optimum(const Network& net, const NoiseSpec& noise,
                             const SignalModel& signal, bool symmetric_hint);

/// Central finite differences of the total analytic loss at a profile
/// (negative entries at a Nash point: raising any m_i helps everyone else).
Vector welfare_gradient(const Network& net, const NoiseSpec& noise, const SignalModel& signal,
                        const Vector& m, double fd_step = 1e-5);

struct NetworkComparisonRow {
  std::string network;
  int n = 0;
  double varpi = 0.0;
  Correlation correlation = Correlation::kIndependent;
  double m_star = 0.0;
  double m0_star = 0.0;  // hub weight (star only; equals m_star otherwise)
  double delta_hat = 0.0;
  double L_star = 0.0;
};

/// Equilibria on the three canonical networks at common (n, varpi).
/// The star solves the hub/spoke reduction with hub error variance varpi0
/// (default: equal to varpi); its row reports the peripheral delta_hat.
std::vector<NetworkComparisonRow> compare_networks(int n, double varpi, Correlation correlation,
                                                   double varpi0 = -1.0);

enum class HubMode { kDeGroot, kBenevolent };

struct PolarizationPoint {
  double m = 0.0;
  double d = 0.0;          // within-star dispersion, exact: 2 m^2 + 2 (1-m)^2 varpi
  double d_leading = 0.0;  // 2 m^2
  double D = 0.0;          // between-star dispersion, large-star hub drift
  double D_leading = 0.0;  // 2 varpi0 / m^2
  double loss = 0.0;       // per-player (d + D) / 2
  // finite-star Monte Carlo (when requested)
  double d_mc = 0.0, d_mc_se = 0.0;
  double D_mc = 0.0, D_mc_se = 0.0;
};

struct PolarizationMcOptions {
  long replicas = 0;  // 0: analytic only
  std::uint64_t seed = 1;
};

struct PolarizationStudy {
  std::vector<PolarizationPoint> points;
  double m_social = 0.0;          // argmin of (d + D)/2, exact path
  double m_social_leading = 0.0;  // argmin with the leading-order D
};

PolarizationStudy polarization_study(int n_per_star, const std::vector<double>& m_grid,
                                     double varpi, double varpi0, HubMode hub_mode,
                                     const PolarizationMcOptions& mc = {});

struct PrecisionScalingRow {
  Vector sigma_sq;
  Vector gamma;
  Vector pi;
  double consensus_variance = 0.0;
  double v_star = 0.0;
};

struct PrecisionScalingReport {
  std::vector<PrecisionScalingRow> rows;
  double max_gap = 0.0;  // max |consensus variance - v*|
  bool pass = false;
};

/// DG with speeds proportional to rho_i sigma_i^2 aggregates efficiently for
/// every drawn precision vector. Throws GammaOutOfRange if the proportional
/// speeds cannot fit inside [gamma_floor, 1].
PrecisionScalingReport precision_scaled_gamma_check(const Network& net,
                                                    const std::vector<Vector>& sigma_sq_samples,
                                                    double gamma_floor = 1e-3,
                                                    double tol = 1e-10);

}  // namespace opinionlab
