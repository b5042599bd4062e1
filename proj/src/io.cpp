#include "opinionlab/io.hpp"

#include <cinttypes>
#include <cstdio>

namespace opinionlab {

void require_keys(const Json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

std::string format_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_line(const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_sig(values[i]);
  }
  return line;
}

std::vector<double> eigen_to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector std_to_eigen(const std::vector<double>& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = v[i];
  return out;
}

Json to_json(const Network& net) {
  Json rows = Json::array();
  for (int i = 0; i < net.n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < net.n; ++j) row.push_back(net.A(i, j));
    rows.push_back(row);
  }
  Json j{{"n", net.n}, {"rows", rows}};
  if (!net.labels.empty()) j["labels"] = net.labels;
  return j;
}

Network network_from_json(const Json& j) {
  require_keys(j, {"n", "rows", "labels", "generator"}, "network");
  if (j.contains("generator")) {
    const int n = j.at("n").get<int>();
    return make_named_network(j.at("generator").get<std::string>(), n);
  }
  const int n = j.at("n").get<int>();
  const auto& rows = j.at("rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw ConfigError("network: rows must be an n-element array");
  Matrix A(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw ConfigError("network: row " + std::to_string(i) + " has wrong length");
    for (int c = 0; c < n; ++c) A(i, c) = rows[i][c].get<double>();
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  try {
    return make_network(std::move(A), std::move(labels));
  } catch (const InvalidSize& e) {
    throw ConfigError(std::string("network: ") + e.what());
  }
}

namespace {
Vector vector_or_constant(const Json& j, const char* key, int n, double fallback) {
  if (!j.contains(key)) return Vector::Constant(n, fallback);
  const auto& v = j.at(key);
  if (v.is_number()) return Vector::Constant(n, v.get<double>());
  return std_to_eigen(v.get<std::vector<double>>());
}
}  // namespace

Json to_json(const RuleProfile& rules) {
  return Json{{"m", eigen_to_std(rules.m)},
              {"gamma", eigen_to_std(rules.gamma)},
              {"gamma_floor", rules.gamma_floor}};
}

RuleProfile rules_from_json(const Json& j, int n) {
  require_keys(j, {"m", "gamma", "gamma_floor"}, "rules");
  const double floor = j.value("gamma_floor", 1e-3);
  Vector m = vector_or_constant(j, "m", n, 0.0);
  Vector gamma = vector_or_constant(j, "gamma", n, 1.0);
  if (m.size() != n || gamma.size() != n) throw ConfigError("rules: length mismatch with n");
  try {
    return make_rules(std::move(m), std::move(gamma), floor);
  } catch (const InvalidSize& e) {
    throw ConfigError(std::string("rules: ") + e.what());
  }
}

Json to_json(const SignalModel& signal) {
  return Json{{"theta_variance", signal.theta_variance},
              {"sigma_sq", eigen_to_std(signal.sigma_sq)}};
}

SignalModel signal_from_json(const Json& j, int n) {
  require_keys(j, {"theta_variance", "sigma_sq"}, "signal");
  SignalModel s;
  s.theta_variance = j.value("theta_variance", 1.0);
  if (s.theta_variance < 0.0) throw ConfigError("signal: theta_variance must be >= 0");
  s.sigma_sq = vector_or_constant(j, "sigma_sq", n, 1.0);
  if (s.sigma_sq.minCoeff() <= 0.0) throw ConfigError("signal: sigma_sq must be positive");
  return s;
}

Json to_json(const NoiseSpec& noise) {
  Json j{{"persistent_variance", noise.persistent_variance},
         {"idiosyncratic_variance", noise.idiosyncratic_variance},
         {"locus", noise.locus == ErrorLocus::kExpressing ? "expressing" : "processing"}};
  if (noise.persistent_bias.size()) j["persistent_bias"] = eigen_to_std(noise.persistent_bias);
  switch (noise.correlation) {
    case Correlation::kIndependent: j["correlation"] = "independent"; break;
    case Correlation::kPerfectlyCorrelated: j["correlation"] = "perfectly_correlated"; break;
    case Correlation::kCustom: {
      Json rows = Json::array();
      for (int i = 0; i < noise.custom_covariance.rows(); ++i) {
        Json row = Json::array();
        for (int c = 0; c < noise.custom_covariance.cols(); ++c)
          row.push_back(noise.custom_covariance(i, c));
        rows.push_back(row);
      }
      j["correlation"] = Json{{"custom", rows}};
      break;
    }
  }
  return j;
}

NoiseSpec noise_from_json(const Json& j, int n) {
  require_keys(j,
               {"persistent_variance", "persistent_bias", "correlation",
                "idiosyncratic_variance", "locus"},
               "noise");
  NoiseSpec s;
  s.persistent_variance = j.value("persistent_variance", 0.0);
  s.idiosyncratic_variance = j.value("idiosyncratic_variance", 0.0);
  if (j.contains("persistent_bias"))
    s.persistent_bias = std_to_eigen(j.at("persistent_bias").get<std::vector<double>>());
  if (j.contains("locus")) {
    const std::string locus = j.at("locus").get<std::string>();
    if (locus == "expressing") s.locus = ErrorLocus::kExpressing;
    else if (locus == "processing") s.locus = ErrorLocus::kProcessing;
    else throw ConfigError("noise: locus must be 'processing' or 'expressing'");
  }
  if (j.contains("correlation")) {
    const auto& c = j.at("correlation");
    if (c.is_string()) {
      const std::string mode = c.get<std::string>();
      if (mode == "independent") s.correlation = Correlation::kIndependent;
      else if (mode == "perfectly_correlated") s.correlation = Correlation::kPerfectlyCorrelated;
      else throw ConfigError("noise: unknown correlation '" + mode + "'");
    } else {
      require_keys(c, {"custom"}, "noise.correlation");
      s.correlation = Correlation::kCustom;
      const auto& rows = c.at("custom");
      const int k = static_cast<int>(rows.size());
      s.custom_covariance = Matrix(k, k);
      for (int i = 0; i < k; ++i)
        for (int q = 0; q < k; ++q) s.custom_covariance(i, q) = rows[i][q].get<double>();
    }
  }
  try {
    validate(s, n);
  } catch (const InvalidSize& e) {
    throw ConfigError(std::string("noise: ") + e.what());
  }
  return s;
}

Json to_json(const LossReport& rep) {
  Json j;
  j["diverged"] = rep.diverged;
  j["v_star"] = rep.v_star;
  j["pi_star"] = eigen_to_std(rep.pi_star);
  if (!rep.diverged) {
    j["L"] = eigen_to_std(rep.L);
    j["W"] = eigen_to_std(rep.W);
    j["delta_hat"] = eigen_to_std(rep.delta_hat);
  }
  if (rep.std_err.size()) j["std_err"] = eigen_to_std(rep.std_err);
  if (rep.replicas) {
    j["replicas"] = rep.replicas;
    j["nonconverged"] = rep.nonconverged;
  }
  return j;
}

Json to_json(const LongRunSolution& sol) {
  Json P = Json::array(), E = Json::array();
  const int n = static_cast<int>(sol.y.size());
  for (int i = 0; i < n; ++i) {
    Json pr = Json::array(), er = Json::array();
    for (int c = 0; c < n; ++c) {
      pr.push_back(sol.seed_weights(i, c));
      er.push_back(sol.error_weights(i, c));
    }
    P.push_back(pr);
    E.push_back(er);
  }
  return Json{{"y", eigen_to_std(sol.y)},
              {"seed_weights", P},
              {"error_weights", E},
              {"dg_set", sol.dg_set}};
}

Json to_json(const InfluenceDecomposition& d) {
  return Json{{"p", d.own_seed_weight},
              {"q", eigen_to_std(d.composite_weights)},
              {"h", d.echo},
              {"R", eigen_to_std(d.r_weights)},
              {"W", d.composite_variance},
              {"xhat_var", d.xhat_var},
              {"omega_hat", d.omega_hat}};
}

Json to_json(const EquilibriumResult& eq) {
  return Json{{"m_star", eigen_to_std(eq.m_star)},
              {"iterations", eq.iterations},
              {"residual", eq.residual},
              {"dg_boundary", eq.dg_boundary},
              {"losses", to_json(eq.losses)}};
}

Json to_json(const Trajectory& t, bool include_path) {
  Json j{{"status", t.status == RunStatus::kConverged
                        ? "converged"
                        : (t.status == RunStatus::kDiverged ? "diverged" : "maxed_out")},
         {"steps", t.steps},
         {"y", eigen_to_std(t.y)}};
  if (include_path) {
    Json path = Json::array();
    for (const Vector& v : t.path) path.push_back(eigen_to_std(v));
    j["path"] = path;
  }
  return j;
}

Json to_json(const NetworkComparisonRow& row) {
  return Json{{"network", row.network},
              {"n", row.n},
              {"varpi", row.varpi},
              {"correlation", row.correlation == Correlation::kPerfectlyCorrelated
                                  ? "perfectly_correlated"
                                  : "independent"},
              {"m_star", row.m_star},
              {"m0_star", row.m0_star},
              {"delta_hat", row.delta_hat},
              {"L_star", row.L_star}};
}

Json to_json(const PolarizationPoint& p) {
  Json j{{"m", p.m},
         {"d", p.d},
         {"d_leading", p.d_leading},
         {"D", p.D},
         {"D_leading", p.D_leading},
         {"loss", p.loss}};
  if (p.d_mc_se > 0.0) {
    j["d_mc"] = p.d_mc;
    j["d_mc_se"] = p.d_mc_se;
    j["D_mc"] = p.D_mc;
    j["D_mc_se"] = p.D_mc_se;
  }
  return j;
}

Json to_json(const CoarseOutcome& outcome) {
  return Json{{"y_limit", outcome.y_limit},
              {"xi_hat", outcome.xi_hat},
              {"unanimity", outcome.unanimity},
              {"unanimity_sign", outcome.unanimity_sign},
              {"f_path", outcome.f_path}};
}

std::uint64_t config_hash(const Json& config) {
  const std::string text = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace opinionlab
