#pragma once

#include <cstdint>
#include <vector>

#include "opinionlab/common.hpp"

namespace opinionlab {

/// Binary-report aggregation with a common inference error. Preferences are
/// Gaussian (mean pref_mean, sd pref_sd); an agent with opinion y reports
/// action 0 with probability h(y) = Pr(y + b < 0), and the population maps the
/// observed fraction back through phi = h^{-1} plus the error xi.
struct CoarseModel {
  double pref_mean = 0.0;  // bbar
  double pref_sd = 1.0;    // s_b
  double seed_sd = 1.0;    // sd of delta_i
  double m = 0.1;
  double gamma = 0.5;
  double xi_variance = 0.0;  // varpi, common (perfectly correlated) error
  int quad_nodes = 64;
};

double coarse_h(const CoarseModel& model, double y);
double coarse_phi(const CoarseModel& model, double f);

/// Gauss-Hermite nodes/weights for E over a standard normal (weights sum 1).
struct GaussHermite {
  Vector nodes;
  Vector weights;
};
GaussHermite gauss_hermite(int n);

struct CoarseOutcome {
  double y_limit = 0.0;
  double xi_hat = 0.0;  // y_limit - theta
  std::vector<double> f_path;
  bool unanimity = false;  // m = 0: population locks onto one action
  int unanimity_sign = 0;  // +1: everyone ends up reporting a = 1
};

/// Mean-field long-run population opinion: the scalar fixed point
/// y = phi( E_delta h( m (theta + delta) + (1-m)(y + xi) ) ).
/// m = 0 yields the unanimity outcome with the sign of xi (and an f-path
/// showing the vanishing fraction). Throws NoRoot if the fixed-point
/// iteration leaves the representable domain.
CoarseOutcome coarse_longrun(const CoarseModel& model, double theta, double xi, double m);

struct CoarseEquilibrium {
  double m_star = 0.0;           // varpi^(1/3), the closed-form equilibrium weight
  double m_social = 0.0;         // numeric argmin of var(m delta + (1-m) xi / m)
  double m_social_approx = 0.0;  // small-varpi approximation varpi^(1/4)
  double m_star_numeric = 0.0;   // fixed point of the numeric-minimizer response
};

CoarseEquilibrium coarse_equilibrium(double varpi);

struct CoarseAgentResult {
  double mean_opinion = 0.0;
  double final_fraction_zero = 0.0;
};

/// Finite-population oracle: n_agents threshold reporters against the
/// population fraction, one seeded stream per run.
CoarseAgentResult coarse_agent_sim(const CoarseModel& model, double theta, double xi, double m,
                                   int n_agents, int periods, int tail_average,
                                   std::uint64_t seed);

}  // namespace opinionlab
