#include "opinionlab/coarse.hpp"

#include <cmath>
#include <random>

namespace opinionlab {

namespace {

// Standard normal cdf and its inverse (Acklam's rational approximation
// polished by one Halley step; |relative error| < 1e-15 after polish).
double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_ppf(double p) {
  if (p <= 0.0 || p >= 1.0) throw NoRoot("norm_ppf(): p outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, x;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley polish against the cdf.
  const double e = norm_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

}  // namespace

double coarse_h(const CoarseModel& model, double y) {
  return norm_cdf((-y - model.pref_mean) / model.pref_sd);
}

double coarse_phi(const CoarseModel& model, double f) {
  return -model.pref_mean - model.pref_sd * norm_ppf(f);
}

GaussHermite gauss_hermite(int n) {
  // Golub-Welsch on the probabilists' Hermite Jacobi matrix: the abscissas of
  // E f(Z), Z standard normal, are the eigenvalues; weights are the squared
  // first components of the eigenvectors.
  Matrix J = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double off = std::sqrt(static_cast<double>(k));
    J(k - 1, k) = off;
    J(k, k - 1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(J);
  GaussHermite gh;
  gh.nodes = es.eigenvalues();
  gh.weights = es.eigenvectors().row(0).transpose().cwiseAbs2();
  gh.weights /= gh.weights.sum();
  return gh;
}

CoarseOutcome coarse_longrun(const CoarseModel& model, double theta, double xi, double m) {
  if (m < 0.0 || m > 1.0) throw InvalidSize("coarse_longrun(): m in [0,1] required");
  CoarseOutcome out;

  if (m == 0.0) {
    // Pure averaging drifts by xi per period; the reported fraction locks
    // onto one action regardless of theta or the seeds.
    out.unanimity = xi != 0.0;
    out.unanimity_sign = xi > 0.0 ? 1 : (xi < 0.0 ? -1 : 0);
    double y = theta;
    for (int t = 0; t < 400; ++t) {
      out.f_path.push_back(coarse_h(model, y));
      y += model.gamma * xi;
    }
    out.y_limit = y;
    out.xi_hat = y - theta;
    return out;
  }

  const GaussHermite gh = gauss_hermite(model.quad_nodes);
  auto pop_fraction = [&](double y) {
    double f = 0.0;
    for (int q = 0; q < gh.nodes.size(); ++q)
      f += gh.weights(q) *
           coarse_h(model, m * (theta + model.seed_sd * gh.nodes(q)) + (1.0 - m) * (y + xi));
    return std::min(std::max(f, 1e-15), 1.0 - 1e-15);
  };

  // The map y -> phi(E h(...)) contracts at rate about (1 - m).
  double y = theta;
  bool converged = false;
  for (int it = 0; it < 200000; ++it) {
    const double yn = coarse_phi(model, pop_fraction(y));
    if (!std::isfinite(yn)) throw NoRoot("coarse_longrun(): fixed-point iterate left domain");
    if (std::abs(yn - y) < 1e-14) {
      y = yn;
      converged = true;
      break;
    }
    y = yn;
  }
  if (!converged) throw NoRoot("coarse_longrun(): fixed point did not settle");
  out.y_limit = y;
  out.xi_hat = y - theta;
  // Representative fraction path from theta to the limit.
  double yp = theta;
  for (int t = 0; t < 100; ++t) {
    out.f_path.push_back(pop_fraction(yp));
    yp = (1.0 - model.gamma) * yp + model.gamma * coarse_phi(model, pop_fraction(yp));
  }
  return out;
}

namespace {

template <typename F>
double golden_min_scalar(F f, double a, double b, double xtol = 1e-13) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) { b = d; d = c; fd = fc; c = b - gr * (b - a); fc = f(c); }
    else         { a = c; c = d; fc = fd; d = a + gr * (b - a); fd = f(d); }
  }
  return 0.5 * (a + b);
}

}  // namespace

CoarseEquilibrium coarse_equilibrium(double varpi) {
  if (varpi < 0.0) throw InvalidSize("coarse_equilibrium(): varpi >= 0 required");
  CoarseEquilibrium eq;
  eq.m_star = std::cbrt(varpi);
  eq.m_social_approx = std::pow(varpi, 0.25);
  if (varpi == 0.0) return eq;  // boundary: no noise, loss flat in the error direction

  // Estimation-error variance when everyone uses m: var(m delta + (1-m) xi/m).
  auto pop_var = [&](double m) {
    return m * m + (1.0 - m) * (1.0 - m) * varpi / (m * m);
  };
  eq.m_social = golden_min_scalar(pop_var, 1e-6, 0.999);

  // Player i against others at m faces error m_i delta + (1 - m_i) xi / m.
  auto br = [&](double m) {
    auto own = [&](double mi) {
      return mi * mi + (1.0 - mi) * (1.0 - mi) * varpi / (m * m);
    };
    return golden_min_scalar(own, 1e-9, 0.999999);
  };
  double m = 0.05;
  for (int it = 0; it < 4000; ++it) {
    const double next = 0.5 * m + 0.5 * br(m);
    if (std::abs(next - m) < 1e-13) { m = next; break; }
    m = next;
  }
  eq.m_star_numeric = m;
  return eq;
}

CoarseAgentResult coarse_agent_sim(const CoarseModel& model, double theta, double xi, double m,
                                   int n_agents, int periods, int tail_average,
                                   std::uint64_t seed) {
  if (n_agents < 2 || periods < 1 || tail_average < 1 || tail_average > periods)
    throw InvalidSize("coarse_agent_sim(): bad sizes");
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Vector b(n_agents), x(n_agents), y(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    b(i) = model.pref_mean + model.pref_sd * gauss(eng);
    x(i) = theta + model.seed_sd * gauss(eng);
    y(i) = x(i);
  }
  double acc = 0.0;
  double fraction = 0.0;
  for (int t = 0; t < periods; ++t) {
    int zeros = 0;
    for (int i = 0; i < n_agents; ++i) zeros += (y(i) + b(i) < 0.0) ? 1 : 0;
    fraction = static_cast<double>(zeros) / n_agents;
    const double f = std::min(std::max(fraction, 1e-12), 1.0 - 1e-12);
    const double z = coarse_phi(model, f) + xi;
    for (int i = 0; i < n_agents; ++i)
      y(i) = (1.0 - model.gamma) * y(i) + model.gamma * (m * x(i) + (1.0 - m) * z);
    if (t >= periods - tail_average) acc += y.mean();
  }
  return CoarseAgentResult{acc / tail_average, fraction};
}

}  // namespace opinionlab
