#include <doctest.h>

#include "opinionlab/io.hpp"

using namespace opinionlab;

TEST_CASE("network JSON round-trip") {
  const Network net = make_star(4);
  const Json j = to_json(net);
  const Network back = network_from_json(j);
  CHECK(back.n == 4);
  CHECK((back.A - net.A).cwiseAbs().maxCoeff() == 0.0);

  const Network named = network_from_json(Json{{"generator", "complete"}, {"n", 3}});
  CHECK(named.n == 3);
  CHECK(named.A(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(network_from_json(Json{{"n", 2}, {"rows", Json::array()}, {"extra", 1}}),
                  ConfigError);
  CHECK_THROWS_AS(rules_from_json(Json{{"m", 0.5}, {"speed", 1.0}}, 2), ConfigError);
  CHECK_THROWS_AS(noise_from_json(Json{{"varpi", 0.1}}, 2), ConfigError);
  CHECK_THROWS_AS(signal_from_json(Json{{"theta_variance", 1.0}, {"sd", 2}}, 2), ConfigError);
}

TEST_CASE("rules/noise/signal round-trips with scalar broadcasting") {
  const RuleProfile rules = rules_from_json(Json{{"m", 0.3}, {"gamma", 0.8}}, 3);
  CHECK(rules.m.size() == 3);
  CHECK(rules.m(2) == 0.3);
  const Json jr = to_json(rules);
  const RuleProfile back = rules_from_json(jr, 3);
  CHECK((back.m - rules.m).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.gamma - rules.gamma).cwiseAbs().maxCoeff() == 0.0);

  NoiseSpec noise;
  noise.persistent_variance = 0.01;
  noise.correlation = Correlation::kPerfectlyCorrelated;
  noise.locus = ErrorLocus::kExpressing;
  noise.persistent_bias = Vector::Constant(3, 0.1);
  const NoiseSpec nb = noise_from_json(to_json(noise), 3);
  CHECK(nb.persistent_variance == 0.01);
  CHECK(nb.correlation == Correlation::kPerfectlyCorrelated);
  CHECK(nb.locus == ErrorLocus::kExpressing);
  CHECK(nb.persistent_bias(1) == 0.1);

  NoiseSpec custom;
  custom.correlation = Correlation::kCustom;
  custom.custom_covariance = 0.02 * Matrix::Identity(3, 3);
  const NoiseSpec cb = noise_from_json(to_json(custom), 3);
  CHECK(cb.correlation == Correlation::kCustom);
  CHECK((cb.custom_covariance - custom.custom_covariance).cwiseAbs().maxCoeff() == 0.0);

  const SignalModel sig = signal_from_json(Json{{"sigma_sq", {1.0, 2.0, 0.5}}}, 3);
  CHECK(sig.sigma_sq(1) == 2.0);
}

TEST_CASE("12-significant-digit formatting") {
  CHECK(format_sig(0.25) == "0.25");
  CHECK(format_sig(1.0 / 3.0) == "0.333333333333");
  CHECK(format_sig(1e-9) == "1e-09");
  CHECK(csv_line({1.0, 0.5, 2e-3}) == "1,0.5,0.002");
}

TEST_CASE("config hash is stable and content-sensitive") {
  const Json a{{"n", 4}, {"varpi", 0.01}};
  const Json b{{"n", 4}, {"varpi", 0.01}};
  const Json c{{"n", 5}, {"varpi", 0.01}};
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("report serializations carry the schema fields") {
  const Network net = make_complete(2);
  SignalModel signal{1.0, Vector::Ones(2)};
  NoiseSpec noise;
  noise.persistent_variance = 0.01;
  const LossReport rep = analytic_loss(net, symmetric_rules(2, 0.4, 1.0), noise, signal);
  const Json j = to_json(rep);
  CHECK(j.contains("L"));
  CHECK(j.contains("W"));
  CHECK(j.contains("delta_hat"));
  CHECK(j.contains("v_star"));

  const InfluenceDecomposition d = influence(net, Vector::Constant(2, 0.4), 0, noise);
  const Json jd = to_json(d);
  for (const char* key : {"p", "q", "h", "R", "W", "xhat_var", "omega_hat"})
    CHECK(jd.contains(key));
}
