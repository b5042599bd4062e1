#include "opinionlab/game.hpp"

#include <cmath>
#include <random>

namespace opinionlab {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Golden-section minimization of a unimodal scalar function on [lo, hi],
// after a coarse grid scan to bracket the basin.
template <typename F>
double golden_min(F f, double lo, double hi, int grid = 64, double xtol = 1e-12) {
  double best_x = lo, best_v = f(lo);
  for (int k = 1; k <= grid; ++k) {
    const double x = lo + (hi - lo) * k / grid;
    const double v = f(x);
    if (v < best_v) { best_v = v; best_x = x; }
  }
  double a = std::max(lo, best_x - (hi - lo) / grid);
  double b = std::min(hi, best_x + (hi - lo) / grid);
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

double best_response(const Network& net, const Vector& m, const NoiseSpec& noise,
                     const SignalModel& signal, int player) {
  const Vector sig = signal.sigma_sq_or_ones(net.n);
  Vector probe = m;
  probe(player) = 0.5;  // own entry is irrelevant to W and h
  const InfluenceDecomposition d = influence(net, probe, player, noise, sig);
  if (d.prop5) return 1.0;  // others carry no seeds: anchor fully
  const double r = d.composite_variance / (d.echo * sig(player));
  return clamp01(r / (1.0 + r));
}

namespace {

EquilibriumResult finish(const Network& net, const NoiseSpec& noise, const SignalModel& signal,
                         Vector m_star, int iters, double residual) {
  EquilibriumResult res;
  res.m_star = std::move(m_star);
  res.iterations = iters;
  res.residual = residual;
  const RuleProfile rules{res.m_star, Vector::Ones(net.n), 1e-3};
  res.losses = analytic_loss(net, rules, noise, signal);
  return res;
}

}  // namespace

EquilibriumResult nash_solve(const Network& net, const NoiseSpec& noise,
                             const SignalModel& signal, const NashOptions& options) {
  const int n = net.n;
  const bool noiseless = noise.persistent_variance == 0.0 &&
                         noise.correlation != Correlation::kCustom &&
                         noise.persistent_bias.size() == 0;
  if (noiseless) {
    EquilibriumResult res;
    res.m_star = Vector::Zero(n);
    res.dg_boundary = true;
    res.losses = analytic_loss(net, RuleProfile{res.m_star, Vector::Ones(n), 1e-3}, noise, signal);
    return res;
  }

  using Mode = NashOptions::Mode;
  if (options.mode == Mode::kSymmetricScalar) {
    // m = BR(m 1) is monotone enough for bracketed bisection.
    auto g = [&](double mm) {
      return best_response(net, Vector::Constant(n, mm), noise, signal, 0) - mm;
    };
    double lo = 1e-9, hi = 1.0 - 1e-9;
    double glo = g(lo), ghi = g(hi);
    if (glo < 0.0 || ghi > 0.0)
      throw NoConvergence("nash_solve(): symmetric reduction failed to bracket a root");
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
    const double m = 0.5 * (lo + hi);
    return finish(net, noise, signal, Vector::Constant(n, m), 200, std::abs(g(m)));
  }

  Vector m = options.m_init.size() == n ? options.m_init : Vector::Constant(n, 0.1);
  if (options.mode == Mode::kStarTwoVar) {
    // Hub/spoke reduction: iterate (m0, m_spoke) only, all spokes tied.
    double m0 = m(0), ms = m(n > 1 ? 1 : 0);
    double residual = 0.0;
    for (long it = 1; it <= options.max_iterations; ++it) {
      Vector full = Vector::Constant(n, ms);
      full(0) = m0;
      const double b0 = best_response(net, full, noise, signal, 0);
      const double bs = best_response(net, full, noise, signal, 1);
      residual = std::max(std::abs(b0 - m0), std::abs(bs - ms));
      m0 = (1.0 - options.damping) * m0 + options.damping * b0;
      ms = (1.0 - options.damping) * ms + options.damping * bs;
      if (residual < options.tol) {
        Vector out = Vector::Constant(n, ms);
        out(0) = m0;
        EquilibriumResult res = finish(net, noise, signal, out, static_cast<int>(it), residual);
        res.m0_view = Vector::Constant(1, m0);
        return res;
      }
    }
    throw NoConvergence("nash_solve(): star reduction stalled at residual " +
                        std::to_string(residual));
  }

  double residual = 0.0;
  for (long it = 1; it <= options.max_iterations; ++it) {
    Vector br(n);
    for (int i = 0; i < n; ++i) br(i) = best_response(net, m, noise, signal, i);
    residual = (br - m).cwiseAbs().maxCoeff();
    m = (1.0 - options.damping) * m + options.damping * br;
    if (residual < options.tol)
      return finish(net, noise, signal, m, static_cast<int>(it), residual);
  }
  throw NoConvergence("nash_solve(): stalled at residual " + std::to_string(residual));
}

SocialOptimum social_optimum(const Network& net, const NoiseSpec& noise,
                             const SignalModel& signal, bool symmetric_hint) {
  const int n = net.n;
  auto total = [&](const Vector& m) {
    const LossReport rep = analytic_loss(net, RuleProfile{m, Vector::Ones(n), 1e-3},
                                         noise, signal);
    return rep.diverged ? std::numeric_limits<double>::infinity() : rep.L.sum();
  };

  if (symmetric_hint) {
    auto f = [&](double mm) { return total(Vector::Constant(n, mm)); };
    const double m = golden_min(f, 1e-6, 1.0);
    return SocialOptimum{Vector::Constant(n, m), f(m)};
  }

  std::mt19937_64 eng(12345);
  std::uniform_real_distribution<double> u(0.02, 0.9);
  Vector best;
  double best_v = std::numeric_limits<double>::infinity();
  for (int start = 0; start < 8; ++start) {
    Vector m(n);
    if (start == 0) m.setConstant(0.1);
    else if (start == 1) m.setConstant(0.5);
    else for (int i = 0; i < n; ++i) m(i) = u(eng);
    double cur = total(m);
    for (int sweep = 0; sweep < 40; ++sweep) {
      const double before = cur;
      for (int i = 0; i < n; ++i) {
        auto fi = [&](double mi) {
          Vector probe = m;
          probe(i) = mi;
          return total(probe);
        };
        m(i) = golden_min(fi, 1e-6, 1.0, 32);
      }
      cur = total(m);
      if (before - cur < 1e-12) break;
    }
    if (cur < best_v) { best_v = cur; best = m; }
  }
  return SocialOptimum{best, best_v};
}

Vector welfare_gradient(const Network& net, const NoiseSpec& noise, const SignalModel& signal,
                        const Vector& m, double fd_step) {
  const int n = net.n;
  auto total = [&](const Vector& mm) {
    return analytic_loss(net, RuleProfile{mm, Vector::Ones(n), 1e-3}, noise, signal).L.sum();
  };
  Vector g(n);
  for (int i = 0; i < n; ++i) {
    const double h = std::max(1e-9, std::min({fd_step, (1.0 - m(i)) / 2, m(i) / 2}));
    Vector up = m, dn = m;
    up(i) += h;
    dn(i) -= h;
    g(i) = (total(up) - total(dn)) / (2.0 * h);
  }
  return g;
}

std::vector<NetworkComparisonRow> compare_networks(int n, double varpi, Correlation correlation,
                                                   double varpi0) {
  if (n < 3) throw InvalidSize("compare_networks(): n >= 3 required");
  if (varpi0 < 0.0) varpi0 = varpi;
  SignalModel signal;  // sigma = 1
  NoiseSpec noise;
  noise.persistent_variance = varpi;
  noise.correlation = correlation;

  std::vector<NetworkComparisonRow> rows;
  auto symmetric_row = [&](const Network& net, const std::string& name) {
    NashOptions opt;
    opt.mode = NashOptions::Mode::kSymmetricScalar;
    const EquilibriumResult eq = nash_solve(net, noise, signal, opt);
    NetworkComparisonRow row;
    row.network = name;
    row.n = n;
    row.varpi = varpi;
    row.correlation = correlation;
    row.m_star = row.m0_star = eq.m_star(0);
    const InfluenceDecomposition d = influence(net, eq.m_star, 0, noise);
    row.delta_hat = d.composite_variance - 1.0 / (n - 1);
    row.L_star = d.composite_variance / (1.0 + d.composite_variance);
    rows.push_back(row);
  };
  symmetric_row(make_complete(n), "complete");
  symmetric_row(make_directed_circle(n), "directed_circle");

  // Star: hub error variance varpi0, spokes varpi.
  const Network star = make_star(n);
  NoiseSpec star_noise = noise;
  if (correlation == Correlation::kIndependent && varpi0 != varpi) {
    star_noise.correlation = Correlation::kCustom;
    star_noise.custom_covariance = varpi * Matrix::Identity(n, n);
    star_noise.custom_covariance(0, 0) = varpi0;
  }
  NashOptions opt;
  opt.mode = NashOptions::Mode::kStarTwoVar;
  opt.m_init = Vector::Constant(n, 0.01);
  const EquilibriumResult eq = nash_solve(star, star_noise, signal, opt);
  NetworkComparisonRow row;
  row.network = "star";
  row.n = n;
  row.varpi = varpi;
  row.correlation = correlation;
  row.m0_star = eq.m_star(0);
  row.m_star = eq.m_star(1);
  const InfluenceDecomposition d = influence(star, eq.m_star, 1, star_noise);
  row.delta_hat = d.composite_variance - 1.0 / (n - 1);
  row.L_star = d.composite_variance / (1.0 + d.composite_variance);
  rows.push_back(row);
  return rows;
}

namespace {

struct StarDraw {
  double ybar = 0.0;   // peripheral average opinion
  double y1 = 0.0, y2 = 0.0;  // two peripheral opinions
};

// Closed-form one-star limit: hub with weight m0, spokes with weight m.
StarDraw star_limit(double m0, double m, const Vector& x, const Vector& xi) {
  const int n = static_cast<int>(x.size());
  const int s = n - 1;
  const double xbar = x.tail(s).mean();
  const double xibar = xi.tail(s).mean();
  const double denom = 1.0 - (1.0 - m0) * (1.0 - m);
  const double y0 = (m0 * x(0) + (1.0 - m0) * (m * xbar + (1.0 - m) * xibar + xi(0))) / denom;
  StarDraw d;
  d.ybar = m * xbar + (1.0 - m) * (y0 + xibar);
  d.y1 = m * x(1) + (1.0 - m) * (y0 + xi(1));
  d.y2 = m * x(2) + (1.0 - m) * (y0 + xi(2));
  return d;
}

}  // namespace

PolarizationStudy polarization_study(int n_per_star, const std::vector<double>& m_grid,
                                     double varpi, double varpi0, HubMode hub_mode,
                                     const PolarizationMcOptions& mc) {
  if (n_per_star < 3) throw InvalidSize("polarization_study(): n_per_star >= 3 required");
  PolarizationStudy study;

  auto D_of = [&](double m) {
    const double ratio = varpi0 / (m * m);
    if (hub_mode == HubMode::kBenevolent)
      return 2.0 * (1.0 - m) * (1.0 - m) * ratio / (1.0 + ratio);
    return 2.0 * (1.0 - m) * (1.0 - m) * ratio;  // DG hub drift (1-m) xi0 / m
  };
  auto d_of = [&](double m) { return 2.0 * m * m + 2.0 * (1.0 - m) * (1.0 - m) * varpi; };

  std::mt19937_64 eng(mc.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (double m : m_grid) {
    PolarizationPoint pt;
    pt.m = m;
    pt.d = d_of(m);
    pt.d_leading = 2.0 * m * m;
    pt.D = D_of(m);
    pt.D_leading = 2.0 * varpi0 / (m * m);
    pt.loss = 0.5 * (pt.d + pt.D);

    if (mc.replicas > 0) {
      const int n = n_per_star;
      const double m0 = hub_mode == HubMode::kDeGroot
                            ? 0.0
                            : (varpi0 / m) / (1.0 + varpi0 / m);
      double acc_d = 0.0, acc_d2 = 0.0, acc_D = 0.0, acc_D2 = 0.0;
      for (long r = 0; r < mc.replicas; ++r) {
        const double theta = gauss(eng);
        auto draw_star = [&]() {
          Vector x(n), xi(n);
          for (int i = 0; i < n; ++i) x(i) = theta + gauss(eng);
          xi(0) = std::sqrt(varpi0) * gauss(eng);
          for (int i = 1; i < n; ++i) xi(i) = std::sqrt(varpi) * gauss(eng);
          return star_limit(m0, m, x, xi);
        };
        const StarDraw a = draw_star();
        const StarDraw b = draw_star();
        const double dv = (a.y1 - a.y2) * (a.y1 - a.y2);
        const double Dv = (a.ybar - b.ybar) * (a.ybar - b.ybar);
        acc_d += dv; acc_d2 += dv * dv;
        acc_D += Dv; acc_D2 += Dv * Dv;
      }
      const double R = static_cast<double>(mc.replicas);
      pt.d_mc = acc_d / R;
      pt.D_mc = acc_D / R;
      pt.d_mc_se = std::sqrt(std::max(0.0, acc_d2 / R - pt.d_mc * pt.d_mc) / R);
      pt.D_mc_se = std::sqrt(std::max(0.0, acc_D2 / R - pt.D_mc * pt.D_mc) / R);
    }
    study.points.push_back(pt);
  }

  auto loss_exact = [&](double m) { return 0.5 * (d_of(m) + D_of(m)); };
  auto loss_lead = [&](double m) { return 0.5 * (d_of(m) + 2.0 * varpi0 / (m * m)); };
  study.m_social = golden_min(loss_exact, 1e-4, 0.98, 256);
  study.m_social_leading = golden_min(loss_lead, 1e-4, 0.98, 256);
  return study;
}

PrecisionScalingReport precision_scaled_gamma_check(const Network& net,
                                                    const std::vector<Vector>& sigma_sq_samples,
                                                    double gamma_floor, double tol) {
  const Vector rho = stationary_weights(net);
  PrecisionScalingReport rep;
  for (const Vector& sig : sigma_sq_samples) {
    if (sig.size() != net.n || sig.minCoeff() <= 0.0)
      throw InvalidSize("precision_scaled_gamma_check(): bad sigma_sq sample");
    PrecisionScalingRow row;
    row.sigma_sq = sig;
    const Vector raw = rho.cwiseProduct(sig);  // gamma_i proportional to rho_i sigma_i^2
    row.gamma = raw / raw.maxCoeff();
    if (row.gamma.minCoeff() < gamma_floor)
      throw GammaOutOfRange("precision_scaled_gamma_check(): proportional speeds fall below "
                            "the floor; cannot fit [gamma_floor, 1]");
    row.pi = dg_consensus(net, row.gamma).pi;
    row.consensus_variance = row.pi.cwiseAbs2().dot(sig);
    row.v_star = efficient_weights(sig).v_star;
    rep.max_gap = std::max(rep.max_gap, std::abs(row.consensus_variance - row.v_star));
    rep.rows.push_back(std::move(row));
  }
  rep.pass = rep.max_gap < tol;
  return rep;
}

}  // namespace opinionlab
