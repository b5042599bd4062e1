#include <doctest.h>

#include <random>

#include "opinionlab/loss.hpp"

using namespace opinionlab;

TEST_CASE("efficient_weights") {
  const auto flat = efficient_weights(Vector::Ones(4));
  for (int i = 0; i < 4; ++i) CHECK(flat.pi_star(i) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(flat.v_star == doctest::Approx(0.25).epsilon(1e-14));

  // sigma^2 = (1, 4): minimizing p^2 + 4 (1-p)^2 gives p = 4/5, value 4/5.
  const auto two = efficient_weights((Vector(2) << 1.0, 4.0).finished());
  CHECK(two.pi_star(0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(two.pi_star(1) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(two.v_star == doctest::Approx(0.8).epsilon(1e-14));

  const auto one = efficient_weights(Vector::Constant(1, 2.5));
  CHECK(one.pi_star(0) == 1.0);
  CHECK(one.v_star == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("analytic_loss: frozen two-player cases") {
  const Network net = make_complete(2);
  SignalModel signal{1.0, Vector::Ones(2)};

  // Full anchoring secures exactly the own-seed variance.
  NoiseSpec noisy;
  noisy.persistent_variance = 0.3;
  const auto anchored = analytic_loss(net, symmetric_rules(2, 1.0, 1.0), noisy, signal);
  CHECK(anchored.L(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(anchored.L(1) == doctest::Approx(1.0).epsilon(1e-12));

  // No noise, m = .5: p = 2/3, L = p^2 + (1-p)^2 = 5/9.
  NoiseSpec quiet;
  const auto mid = analytic_loss(net, symmetric_rules(2, 0.5, 1.0), quiet, signal);
  CHECK(mid.L(0) == doctest::Approx(5.0 / 9).epsilon(1e-12));

  // Independent errors, equal m: L = I(p) (1 + X(m)) with p = 1/(2-m) and
  // X(m) = varpi (1-m)^2 / m^2; cross-checks the quadratic-form path.
  for (double m : {0.1, 0.3, 0.6}) {
    for (double varpi : {1e-3, 1e-2}) {
      NoiseSpec noise;
      noise.persistent_variance = varpi;
      const auto rep = analytic_loss(net, symmetric_rules(2, m, 1.0), noise, signal);
      const double p = 1.0 / (2.0 - m);
      const double I = p * p + (1 - p) * (1 - p);
      const double X = varpi * (1 - m) * (1 - m) / (m * m);
      CHECK(rep.L(0) == doctest::Approx(I * (1 + X)).epsilon(1e-11));
    }
  }
}

TEST_CASE("analytic_loss: divergence marker and bias contribution") {
  const Network net = make_complete(3);
  SignalModel signal{1.0, Vector::Ones(3)};
  NoiseSpec noise;
  noise.persistent_variance = 0.01;
  const auto dg = analytic_loss(net, symmetric_rules(3, 0.0, 0.5), noise, signal);
  CHECK(dg.diverged);

  // A pure bias shifts the loss by the squared mean error term.
  NoiseSpec biased;
  biased.persistent_bias = Vector::Constant(3, 0.2);
  const auto with_bias = analytic_loss(net, symmetric_rules(3, 0.4, 1.0), biased, signal);
  NoiseSpec clean;
  const auto without = analytic_loss(net, symmetric_rules(3, 0.4, 1.0), clean, signal);
  CHECK(with_bias.L(0) > without.L(0));
  // Flat bias vector b: the error term is b * (row sum of error weights).
  const LongRunSolution sol = solve_longrun(net, Vector::Constant(3, 0.4),
                                            Vector::Zero(3), Vector::Zero(3));
  const double rowsum = sol.error_weights.row(0).sum();
  CHECK(with_bias.L(0) - without.L(0) ==
        doctest::Approx(std::pow(0.2 * rowsum, 2)).epsilon(1e-10));
}

TEST_CASE("loss respects the efficient benchmark and noise monotonicity") {
  const Network net = make_star(4);
  SignalModel signal{1.0, Vector::Ones(4)};
  double last0 = -1.0;
  for (double varpi : {0.0, 1e-4, 1e-3, 1e-2, 5e-2}) {
    NoiseSpec noise;
    noise.persistent_variance = varpi;
    const auto rep = analytic_loss(net, symmetric_rules(4, 0.35, 1.0), noise, signal);
    for (int i = 0; i < 4; ++i) CHECK(rep.L(i) >= rep.v_star - 1e-10);
    CHECK(rep.L(0) > last0);  // nondecreasing in varpi
    last0 = rep.L(0);
  }
  double lastV = -1.0;
  for (double varpi0 : {0.0, 1e-4, 1e-3}) {
    NoiseSpec noise;
    noise.idiosyncratic_variance = varpi0;
    const auto rep = analytic_loss(net, symmetric_rules(4, 0.35, 0.8), noise, signal);
    CHECK(rep.L(0) > lastV);
    lastV = rep.L(0);
  }
}

TEST_CASE("mc_loss agrees with analytic_loss within Monte Carlo error") {
  std::mt19937_64 eng(23);
  std::uniform_real_distribution<double> u(0.25, 0.8);
  for (int cfg = 0; cfg < 4; ++cfg) {
    const int n = 3 + (cfg % 2);
    const Network net = cfg % 2 == 0 ? make_complete(n) : make_star(n);
    Vector m(n);
    for (int i = 0; i < n; ++i) m(i) = u(eng);
    const RuleProfile rules = make_rules(m, Vector::Ones(n));
    SignalModel signal{1.0, Vector::Ones(n)};
    NoiseSpec noise;
    noise.persistent_variance = 0.02;
    McOptions mc;
    mc.replicas = 4000;
    mc.seed = 1000 + cfg;
    const auto est = mc_loss(net, rules, noise, signal, mc);
    const auto exact = analytic_loss(net, rules, noise, signal);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(est.L(i) - exact.L(i)) < 4.0 * est.std_err(i));
  }
}

TEST_CASE("mc_loss with anchored seeds only: estimate near one") {
  const Network net = make_complete(3);
  const RuleProfile rules = symmetric_rules(3, 1.0, 1.0);
  SignalModel signal{1.0, Vector::Ones(3)};
  NoiseSpec noise;
  McOptions mc;
  mc.replicas = 3000;
  const auto est = mc_loss(net, rules, noise, signal, mc);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(est.L(i) - 1.0) < 4.0 * est.std_err(i));
}

TEST_CASE("mc_loss under efficient DG speeds estimates v_star") {
  // Noiseless pure averaging with speeds tuned to the stationary weights
  // aggregates efficiently.
  const Network net = make_star(4);
  const Vector rho = stationary_weights(net);
  Vector sigma_sq = (Vector(4) << 1.0, 2.0, 0.5, 1.0).finished();
  Vector gamma = rho.cwiseProduct(sigma_sq);
  gamma /= gamma.maxCoeff();
  const RuleProfile rules = make_rules(Vector::Zero(4), gamma);
  SignalModel signal{1.0, sigma_sq};
  NoiseSpec noise;
  McOptions mc;
  mc.replicas = 3000;
  mc.seed = 5;
  const auto est = mc_loss(net, rules, noise, signal, mc);
  const double vstar = efficient_weights(sigma_sq).v_star;
  for (int i = 0; i < 4; ++i) CHECK(std::abs(est.L(i) - vstar) < 4.0 * est.std_err(i));
}

TEST_CASE("dominance of the floor weight over lower anchors") {
  // Any m_i below varpi/(1+varpi) is dominated by the floor, under both
  // independent and perfectly correlated errors. Grid of 50 points.
  const Network net = make_complete(2);
  SignalModel signal{1.0, Vector::Ones(2)};
  for (double varpi : {0.1, 0.01}) {
    for (Correlation corr : {Correlation::kIndependent, Correlation::kPerfectlyCorrelated}) {
      NoiseSpec noise;
      noise.persistent_variance = varpi;
      noise.correlation = corr;
      const double floor = varpi / (1 + varpi);
      auto L0 = [&](double mi) {
        Vector m(2);
        m << mi, 0.3;
        return analytic_loss(net, make_rules(m, Vector::Ones(2)), noise, signal).L(0);
      };
      const double at_floor = L0(floor);
      for (int k = 1; k <= 50; ++k) {
        const double mi = floor * k / 51.0;
        CHECK(at_floor <= L0(mi) + 1e-12);
      }
    }
  }
}

TEST_CASE("locus comparison identities") {
  // Directed circle: hearing-side and speaking-side cumulated errors agree.
  for (int n : {3, 5, 10}) {
    for (double m : {0.05, 0.2, 0.5}) {
      const auto circle = locus_comparison(NetKind::kDirectedCircle, n, m, 0.01);
      CHECK(std::abs(circle.difference()) < 1e-10);

      const auto complete = locus_comparison(NetKind::kComplete, n, m, 0.01);
      CHECK(complete.difference() ==
            doctest::Approx(0.01 * (n - 2.0) / (n - 1.0)).epsilon(1e-10));

      // Star hub with s = n - 1 spokes: difference varpi (2-m)(s-1)/(m s).
      const auto star = locus_comparison(NetKind::kStar, n, m, 0.01);
      const double s = n - 1.0;
      CHECK(star.difference() ==
            doctest::Approx(0.01 * (2.0 - m) * (s - 1.0) / (m * s)).epsilon(1e-10));
    }
  }
  // n=4 complete at any m: difference = varpi * 2/3.
  const auto c4 = locus_comparison(NetKind::kComplete, 4, 0.3, 0.01);
  CHECK(c4.difference() == doctest::Approx(0.01 * 2.0 / 3.0).epsilon(1e-10));
  // No noise: both zero.
  const auto quiet = locus_comparison(NetKind::kComplete, 4, 0.3, 0.0);
  CHECK(quiet.omega_hat_processing == 0.0);
  CHECK(quiet.omega_hat_expressing == 0.0);
}
