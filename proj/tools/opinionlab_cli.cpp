// Command-line driver: run configs, sweeps and reproduction targets, emitting
// plot-ready CSV or JSON.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include "opinionlab/io.hpp"

namespace ol = opinionlab;
using ol::Json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::optional<int> n;
  std::optional<double> varpi;
  std::optional<double> m;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  std::string network_name;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file");
  cmd->add_option("--out", args.out_path, "output path (default: stdout)");
  cmd->add_option("--format", args.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--network", args.network_name,
                  "generator name: complete|directed_circle|star|two_stars");
  cmd->add_option("--n", args.n, "player count (per star for two_stars)");
  cmd->add_option("--varpi", args.varpi, "persistent error variance");
  cmd->add_option("--m", args.m, "symmetric seed weight");
  cmd->add_option("--gamma", args.gamma, "symmetric adjustment speed");
  cmd->add_option("--seed", args.seed, "RNG seed");
}

Json load_config(const CommonArgs& args) {
  if (args.config_path.empty()) return Json::object();
  std::ifstream in(args.config_path);
  if (!in) throw ol::ConfigError("cannot open config '" + args.config_path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ol::ConfigError("config parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
  }
}

struct Problem {
  ol::Network net;
  ol::RuleProfile rules;
  ol::SignalModel signal;
  ol::NoiseSpec noise;
  std::uint64_t seed = 1;
};

Problem build_problem(const CommonArgs& args, const Json& config) {
  ol::require_keys(config,
                   {"network", "rules", "signal", "noise", "protocol", "seed", "options"},
                   "config");
  Problem p;
  if (config.contains("network")) {
    p.net = ol::network_from_json(config.at("network"));
  } else if (!args.network_name.empty()) {
    p.net = ol::make_named_network(args.network_name, args.n.value_or(2));
  } else {
    throw ol::ConfigError("no network given: use --network or a config file");
  }
  const int n = p.net.n;

  p.rules = config.contains("rules")
                ? ol::rules_from_json(config.at("rules"), n)
                : ol::make_rules(ol::Vector::Constant(n, 0.1), ol::Vector::Ones(n));
  if (args.m) p.rules.m.setConstant(*args.m);
  if (args.gamma) p.rules.gamma.setConstant(*args.gamma);

  p.signal = config.contains("signal") ? ol::signal_from_json(config.at("signal"), n)
                                       : ol::SignalModel{1.0, ol::Vector::Ones(n)};
  p.noise = config.contains("noise") ? ol::noise_from_json(config.at("noise"), n)
                                     : ol::NoiseSpec{};
  if (args.varpi) p.noise.persistent_variance = *args.varpi;
  p.seed = args.seed.value_or(config.value("seed", 1));
  return p;
}

void emit(const CommonArgs& args, const std::string& text) {
  if (args.out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) throw ol::ConfigError("cannot open output '" + args.out_path + "'");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

std::string trajectory_csv(const ol::Trajectory& t) {
  std::string csv = "t";
  const int n = static_cast<int>(t.y.size());
  for (int i = 1; i <= n; ++i) csv += ",y_" + std::to_string(i);
  csv += "\n";
  for (std::size_t k = 0; k < t.path.size(); ++k) {
    csv += std::to_string(k) + "," + ol::csv_line(ol::eigen_to_std(t.path[k])) + "\n";
  }
  return csv;
}

// ---------------------------------------------------------------- reproduce

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ol::ConfigError("cannot open output '" + path + "'");
  out << text;
}

int run_reproduce(const std::string& target, const std::string& out_dir, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> outputs;
  Json config{{"target", target}, {"seed", seed}};

  if (target == "fig1") {
    // Two-player best-response curves at varpi = 0.01.
    const double varpi = 0.01;
    config["varpi"] = varpi;
    ol::Network net = ol::make_complete(2);
    ol::NoiseSpec noise;
    noise.persistent_variance = varpi;
    ol::SignalModel signal{1.0, ol::Vector::Ones(2)};
    std::string csv = "m_j,br_m_i\n";
    for (int k = 1; k <= 199; ++k) {
      const double mj = k / 200.0;
      ol::Vector m = ol::Vector::Constant(2, mj);
      const double br = ol::best_response(net, m, noise, signal, 0);
      csv += ol::format_sig(mj) + "," + ol::format_sig(br) + "\n";
    }
    write_file(out_dir + "/fig1_best_response.csv", csv);
    outputs.push_back("fig1_best_response.csv");
    ol::NashOptions opt;
    opt.mode = ol::NashOptions::Mode::kSymmetricScalar;
    const auto eq = ol::nash_solve(net, noise, signal, opt);
    write_file(out_dir + "/fig1_equilibrium.json",
               Json{{"varpi", varpi}, {"m_star", eq.m_star(0)}}.dump(2));
    outputs.push_back("fig1_equilibrium.json");
  } else if (target == "table-two-player") {
    std::string csv = "varpi,m_star,m_star_star\n";
    for (double varpi : {1e-2, 1e-3, 1e-4}) {
      ol::Network net = ol::make_complete(2);
      ol::NoiseSpec noise;
      noise.persistent_variance = varpi;
      ol::SignalModel signal{1.0, ol::Vector::Ones(2)};
      ol::NashOptions opt;
      opt.mode = ol::NashOptions::Mode::kSymmetricScalar;
      const auto eq = ol::nash_solve(net, noise, signal, opt);
      const auto so = ol::social_optimum(net, noise, signal, true);
      csv += ol::format_sig(varpi) + "," + ol::format_sig(eq.m_star(0)) + "," +
             ol::format_sig(so.m(0)) + "\n";
    }
    write_file(out_dir + "/table_two_player.csv", csv);
    outputs.push_back("table_two_player.csv");
  } else if (target == "prop-a0") {
    std::string csv = "network,n,varpi,correlation,m_star,m0_star,delta_hat,L_star\n";
    for (int n : {5, 200}) {
      for (const auto& row : ol::compare_networks(n, 1e-6, ol::Correlation::kIndependent)) {
        csv += row.network + "," + std::to_string(row.n) + "," + ol::format_sig(row.varpi) +
               ",independent," + ol::format_sig(row.m_star) + "," +
               ol::format_sig(row.m0_star) + "," + ol::format_sig(row.delta_hat) + "," +
               ol::format_sig(row.L_star) + "\n";
      }
    }
    write_file(out_dir + "/prop_a0.csv", csv);
    outputs.push_back("prop_a0.csv");
  } else if (target == "result5") {
    const double varpi0 = 1e-4;
    config["varpi0"] = varpi0;
    std::vector<double> grid;
    for (int k = 2; k <= 30; ++k) grid.push_back(k / 100.0);
    const auto study = ol::polarization_study(500, grid, varpi0, varpi0,
                                              ol::HubMode::kDeGroot, {});
    std::string csv = "m,d,D,D_leading,loss\n";
    for (const auto& pt : study.points)
      csv += ol::format_sig(pt.m) + "," + ol::format_sig(pt.d) + "," + ol::format_sig(pt.D) +
             "," + ol::format_sig(pt.D_leading) + "," + ol::format_sig(pt.loss) + "\n";
    write_file(out_dir + "/result5_dispersion.csv", csv);
    outputs.push_back("result5_dispersion.csv");
    write_file(out_dir + "/result5_summary.json",
               Json{{"m_social", study.m_social},
                    {"m_social_leading", study.m_social_leading}}
                   .dump(2));
    outputs.push_back("result5_summary.json");
  } else {
    throw ol::ConfigError("unknown reproduce target '" + target + "'");
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Json manifest{{"target", target},
                {"config_hash", ol::config_hash(config)},
                {"seed", seed},
                {"runtime_seconds", secs},
                {"outputs", outputs}};
  write_file(out_dir + "/manifest_" + target + ".json", manifest.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opinionlab: noisy opinion dynamics and the rule-choice game"};
  app.require_subcommand(1);

  CommonArgs args;
  bool trace = false;
  long replicas = 1000, horizon = 0;
  int player = 0;
  double damping = 0.5, varpi0 = -1.0;
  bool symmetric = false;
  std::string correlation = "independent", target, hub_mode = "dg";

  auto* c_sim = app.add_subcommand("simulate", "run the update dynamics");
  add_common(c_sim, args);
  c_sim->add_flag("--trace", trace, "emit the full trajectory as CSV");

  auto* c_long = app.add_subcommand("longrun", "closed-form limit opinions");
  add_common(c_long, args);

  auto* c_loss = app.add_subcommand("loss", "expected losses (analytic)");
  add_common(c_loss, args);
  auto* c_mcloss = app.add_subcommand("mc-loss", "expected losses (Monte Carlo)");
  add_common(c_mcloss, args);
  c_mcloss->add_option("--replicas", replicas, "Monte Carlo replicas");
  c_mcloss->add_option("--horizon", horizon, "fixed horizon (0: to convergence)");

  auto* c_br = app.add_subcommand("best-response", "one player's optimal seed weight");
  add_common(c_br, args);
  c_br->add_option("--player", player, "responding player index");

  auto* c_nash = app.add_subcommand("nash", "rule-choice equilibrium");
  add_common(c_nash, args);
  c_nash->add_option("--damping", damping, "best-response damping");
  c_nash->add_flag("--symmetric", symmetric, "scalar symmetric reduction");

  auto* c_soc = app.add_subcommand("social-opt", "welfare-minimizing weights");
  add_common(c_soc, args);
  c_soc->add_flag("--symmetric", symmetric, "restrict to symmetric profiles");

  auto* c_cmp = app.add_subcommand("compare-networks", "equilibria on canonical networks");
  add_common(c_cmp, args);
  c_cmp->add_option("--correlation", correlation, "independent|perfectly_correlated")
      ->check(CLI::IsMember({"independent", "perfectly_correlated"}));
  c_cmp->add_option("--varpi0", varpi0, "hub error variance (star), default varpi");

  auto* c_pol = app.add_subcommand("polarization", "two-star dispersion study");
  add_common(c_pol, args);
  c_pol->add_option("--varpi0", varpi0, "hub error variance, default varpi");
  c_pol->add_option("--hub-mode", hub_mode, "dg|benevolent")
      ->check(CLI::IsMember({"dg", "benevolent"}));
  c_pol->add_option("--replicas", replicas, "Monte Carlo replicas (0: analytic only)");

  auto* c_coarse = app.add_subcommand("coarse", "binary-report aggregation sweep");
  add_common(c_coarse, args);

  auto* c_rep = app.add_subcommand("reproduce", "named desk-scale reproductions");
  add_common(c_rep, args);
  c_rep->add_option("target", target, "fig1|table-two-player|prop-a0|result5")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const Json config = load_config(args);

    if (c_sim->parsed()) {
      Problem p = build_problem(args, config);
      const auto real = ol::sample_realization(p.signal, p.noise, p.net.n, p.seed, &p.net);
      ol::RunOptions ro;
      ro.record_path = trace;
      const auto traj = ol::run(p.net, p.rules, real, ol::Protocol::synchronous(), ro);
      emit(args, trace && args.format == "csv" ? trajectory_csv(traj)
                                               : ol::to_json(traj, trace).dump(2));
    } else if (c_long->parsed()) {
      Problem p = build_problem(args, config);
      const auto real = ol::sample_realization(p.signal, p.noise, p.net.n, p.seed, &p.net);
      const auto sol = ol::solve_longrun(p.net, p.rules.m, real.x, real.xi);
      emit(args, ol::to_json(sol).dump(2));
    } else if (c_loss->parsed()) {
      Problem p = build_problem(args, config);
      const auto rep = ol::analytic_loss(p.net, p.rules, p.noise, p.signal);
      if (args.format == "csv") {
        std::string csv = "player,L,W,delta_hat\n";
        for (int i = 0; i < p.net.n && !rep.diverged; ++i)
          csv += std::to_string(i) + "," +
                 ol::csv_line({rep.L(i), rep.W(i), rep.delta_hat(i)}) + "\n";
        emit(args, csv);
      } else {
        emit(args, ol::to_json(rep).dump(2));
      }
    } else if (c_mcloss->parsed()) {
      Problem p = build_problem(args, config);
      ol::McOptions mo;
      mo.replicas = replicas;
      mo.horizon = horizon;
      mo.seed = p.seed;
      emit(args, ol::to_json(ol::mc_loss(p.net, p.rules, p.noise, p.signal, mo)).dump(2));
    } else if (c_br->parsed()) {
      Problem p = build_problem(args, config);
      const double br = ol::best_response(p.net, p.rules.m, p.noise, p.signal, player);
      emit(args, Json{{"player", player}, {"m_i", br}}.dump(2));
    } else if (c_nash->parsed()) {
      Problem p = build_problem(args, config);
      ol::NashOptions opt;
      opt.damping = damping;
      if (symmetric) opt.mode = ol::NashOptions::Mode::kSymmetricScalar;
      emit(args, ol::to_json(ol::nash_solve(p.net, p.noise, p.signal, opt)).dump(2));
    } else if (c_soc->parsed()) {
      Problem p = build_problem(args, config);
      const auto so = ol::social_optimum(p.net, p.noise, p.signal, symmetric);
      emit(args, Json{{"m", ol::eigen_to_std(so.m)}, {"total_loss", so.total_loss}}.dump(2));
    } else if (c_cmp->parsed()) {
      const int n = args.n.value_or(5);
      const double varpi = args.varpi.value_or(1e-6);
      const auto corr = correlation == "independent" ? ol::Correlation::kIndependent
                                                     : ol::Correlation::kPerfectlyCorrelated;
      const auto rows = ol::compare_networks(n, varpi, corr, varpi0);
      if (args.format == "csv") {
        std::string csv = "network,n,varpi,correlation,m_star,m0_star,delta_hat,L_star\n";
        for (const auto& r : rows)
          csv += r.network + "," + std::to_string(r.n) + "," + ol::format_sig(r.varpi) + "," +
                 correlation + "," + ol::format_sig(r.m_star) + "," +
                 ol::format_sig(r.m0_star) + "," + ol::format_sig(r.delta_hat) + "," +
                 ol::format_sig(r.L_star) + "\n";
        emit(args, csv);
      } else {
        Json out = Json::array();
        for (const auto& r : rows) out.push_back(ol::to_json(r));
        emit(args, out.dump(2));
      }
    } else if (c_pol->parsed()) {
      const int n = args.n.value_or(500);
      const double varpi = args.varpi.value_or(1e-4);
      const double v0 = varpi0 > 0 ? varpi0 : varpi;
      std::vector<double> grid;
      for (int k = 2; k <= 30; ++k) grid.push_back(k / 100.0);
      ol::PolarizationMcOptions mc;
      mc.replicas = replicas;
      mc.seed = args.seed.value_or(1);
      const auto study = ol::polarization_study(
          n, grid, varpi, v0,
          hub_mode == "dg" ? ol::HubMode::kDeGroot : ol::HubMode::kBenevolent, mc);
      if (args.format == "csv") {
        std::string csv = "m,d,D,D_leading,loss,d_mc,D_mc\n";
        for (const auto& pt : study.points)
          csv += ol::csv_line({pt.m, pt.d, pt.D, pt.D_leading, pt.loss, pt.d_mc, pt.D_mc}) +
                 "\n";
        emit(args, csv);
      } else {
        Json out{{"m_social", study.m_social},
                 {"m_social_leading", study.m_social_leading},
                 {"points", Json::array()}};
        for (const auto& pt : study.points) out["points"].push_back(ol::to_json(pt));
        emit(args, out.dump(2));
      }
    } else if (c_coarse->parsed()) {
      const double varpi = args.varpi.value_or(1e-4);
      ol::CoarseModel model;
      model.xi_variance = varpi;
      const double xi = std::sqrt(varpi);  // one-sigma representative error
      std::string csv = "m,xi_hat,loss\n";
      for (int k = 1; k <= 60; ++k) {
        const double m = k / 100.0;
        const auto out = ol::coarse_longrun(model, 0.0, xi, m);
        const double loss = m * m * model.seed_sd * model.seed_sd + out.xi_hat * out.xi_hat;
        csv += ol::csv_line({m, out.xi_hat, loss}) + "\n";
      }
      emit(args, csv);
    } else if (c_rep->parsed()) {
      const std::string dir = args.out_path.empty() ? "." : args.out_path;
      return run_reproduce(target, dir, args.seed.value_or(1));
    }
    return 0;
  } catch (const ol::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
