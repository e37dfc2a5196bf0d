// Experiment driver: load a config, run agents or the oracle, emit
// CSV/JSON artifacts. Exit codes: 0 success, 1 runtime failure,
// 2 usage/config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "railbeam/beamdb.hpp"
#include "railbeam/config.hpp"
#include "railbeam/csv.hpp"
#include "railbeam/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace railbeam;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig load_cfg(const CommonOpts& o) {
  if (o.config_path.empty()) return default_config();
  return load_config(o.config_path);
}

fs::path resolve_out_dir(const CommonOpts& o, const ExperimentConfig& cfg) {
  std::string dir = cfg.output_dir;
  if (const char* env_dir = std::getenv("RAILBEAM_OUT"); env_dir && *env_dir)
    dir = env_dir;
  if (!o.out_dir.empty()) dir = o.out_dir;
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create output directory " + p.string());
  return p;
}

std::vector<std::uint64_t> resolve_seeds(const CommonOpts& o,
                                         const ExperimentConfig& cfg) {
  if (o.seed) return {*o.seed};
  return cfg.seeds;
}

std::string provenance(const std::string& cmd, const std::string& hash,
                       std::optional<std::uint64_t> seed) {
  std::string p = "railbeam " + cmd + " config=" + hash;
  p += seed ? " seed=" + std::to_string(*seed) : " seed=none";
  return p;
}

void report_power_violations(const std::string& agent, const RspVector& v) {
  if (v.power_violations.empty()) return;
  std::cerr << "warning: " << agent << ": received power exceeds transmit power at "
            << v.power_violations.size() << " bin(s), first at bin "
            << v.power_violations.front() << "\n";
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

const std::vector<std::string> kAllAgents{"fba", "gamma", "dqn", "qlearning",
                                          "dqn16"};

int cmd_simulate(const CommonOpts& o, std::vector<std::string> agents) {
  const ExperimentConfig cfg = load_cfg(o);
  const std::string hash = config_hash(cfg);
  const fs::path out_dir = resolve_out_dir(o, cfg);
  const std::vector<std::uint64_t> seeds = resolve_seeds(o, cfg);
  if (agents.empty()) agents = kAllAgents;
  for (const auto& a : agents)
    if (std::find(kAllAgents.begin(), kAllAgents.end(), a) == kAllAgents.end())
      throw CLI::ValidationError("--agent", "unknown agent '" + a + "'");

  const BeamEnv env = make_env(cfg);
  const int n = env.n_bins();

  json summary;
  summary["command"] = "simulate";
  summary["config"] = hash;
  summary["seeds"] = seeds;

  // Curves entering the combined CSV, one per agent (first seed for the
  // learned agents).
  std::map<std::string, std::vector<double>> combined;

  const RspVector fba = run_fba(env);
  if (std::find(agents.begin(), agents.end(), "fba") != agents.end()) {
    report_power_violations("fba", fba);
    const std::vector<BeamDirection> policy(static_cast<std::size_t>(n),
                                            env.benchmark_beam());
    write_rsp_csv((out_dir / "fba_rsp.csv").string(),
                  provenance("simulate", hash, std::nullopt), policy,
                  env.tx_beam(), cfg.scenario, cfg.rrh_panel, cfg.mr_panel);
    combined["fba"] = fba.values_dbm;
    summary["agents"]["fba"] = {{"avg_reward_db", 0.0},
                                {"mean_rsp_dbm", mean_rsp_dbm(fba)},
                                {"objective_eq14a", objective(fba, cfg.scenario)}};
  }

  if (std::find(agents.begin(), agents.end(), "gamma") != agents.end()) {
    const BeamEnv genv = make_gamma_env(cfg);
    const GammaGreedyResult g = run_gamma_greedy(genv);
    report_power_violations("gamma", g.rsp);
    write_rsp_csv((out_dir / "gamma_rsp.csv").string(),
                  provenance("simulate", hash, std::nullopt), g.beams,
                  genv.tx_beam(), genv.scenario(), cfg.rrh_panel, cfg.mr_panel);
    double gap = 0.0;
    for (int b = 1; b <= genv.n_bins(); ++b)
      gap += g.rsp.values_dbm[static_cast<std::size_t>(b - 1)] -
             genv.benchmark_rsp_dbm(b);
    gap /= static_cast<double>(genv.n_bins());
    summary["agents"]["gamma"] = {
        {"avg_reward_db", gap},
        {"mean_rsp_dbm", mean_rsp_dbm(g.rsp)},
        {"objective_eq14a", objective(g.rsp, genv.scenario())},
        {"bin_radius_m", cfg.gamma_greedy_bin_radius_m}};
    // Sample onto the coarse bins when the grids align.
    std::vector<double> sampled;
    const double fine_span = 2.0 * cfg.gamma_greedy_bin_radius_m;
    bool aligned = true;
    for (int b = 1; b <= n && aligned; ++b) {
      const double x = env.position(b);
      const double idx = x / fine_span;
      if (std::abs(idx - std::round(idx)) > 1e-9) {
        aligned = false;
        break;
      }
      const auto k = static_cast<std::size_t>(std::llround(idx));
      if (k >= g.rsp.values_dbm.size()) {
        aligned = false;
        break;
      }
      sampled.push_back(g.rsp.values_dbm[k]);
    }
    if (aligned) combined["gamma"] = sampled;
  }

  for (const std::string name : {std::string("dqn"), std::string("qlearning"),
                                 std::string("dqn16")}) {
    if (std::find(agents.begin(), agents.end(), name) == agents.end()) continue;
    std::vector<double> per_seed;
    for (std::uint64_t seed : seeds) {
      TrainReport report;
      if (name == "dqn") {
        report = train_dqn(env, cfg.dqn, seed).report;
      } else if (name == "dqn16") {
        report = train_dqn_codebook16(env, cfg.dqn, seed).report;
      } else {
        report = train_qlearning(env, cfg.qlearning, seed).report;
      }
      per_seed.push_back(report.avg_reward_db);
      const std::string stem = name + "_s" + std::to_string(seed);
      write_rsp_csv((out_dir / (stem + "_rsp.csv")).string(),
                    provenance("simulate", hash, seed), report.policy,
                    env.tx_beam(), cfg.scenario, cfg.rrh_panel, cfg.mr_panel);
      write_report_json((out_dir / (stem + "_report.json")).string(), report,
                        hash);
      if (seed == seeds.front()) combined[name] = report.policy_rsp_dbm;
      std::cerr << "trained " << name << " seed " << seed << ": avg reward "
                << report.avg_reward_db << " dB in " << report.wall_clock_s
                << " s\n";
    }
    double mean = 0.0;
    for (double v : per_seed) mean += v;
    mean /= static_cast<double>(per_seed.size());
    summary["agents"][name] = {{"per_seed_avg_reward_db", per_seed},
                               {"avg_reward_db_mean", mean}};
  }

  // Combined comparison CSV on the coarse bins.
  {
    auto out = csvio::open_csv((out_dir / "comparison_rsp.csv").string(),
                               provenance("simulate", hash,
                                          seeds.empty() ? std::nullopt
                                                        : std::optional(seeds.front())));
    out << "bin_index,position_m";
    for (const auto& [name, curve] : combined) out << ',' << name << "_rsp_dbm";
    out << '\n';
    for (int b = 1; b <= n; ++b) {
      out << b << ',' << csvio::fmt(env.position(b));
      for (const auto& [name, curve] : combined)
        out << ',' << csvio::fmt(curve[static_cast<std::size_t>(b - 1)]);
      out << '\n';
    }
  }

  write_json_file(out_dir / "summary.json", summary);
  std::cout << "simulate: wrote artifacts to " << out_dir.string() << "\n";
  return 0;
}

int cmd_train(const CommonOpts& o, const std::string& agent) {
  const ExperimentConfig cfg = load_cfg(o);
  const std::string hash = config_hash(cfg);
  const fs::path out_dir = resolve_out_dir(o, cfg);
  const std::uint64_t seed = resolve_seeds(o, cfg).front();
  const BeamEnv env = make_env(cfg);
  const std::string stem = agent + "_s" + std::to_string(seed);

  TrainReport report;
  BeamDatabase db(1, 1);
  if (agent == "dqn") {
    DqnResult r = train_dqn(env, cfg.dqn, seed);
    save_network((out_dir / (stem + ".rbw")).string(), r.params, "dqn");
    db = build_database_dqn(r.params, env, cfg.database.candidates);
    report = std::move(r.report);
  } else if (agent == "dqn16") {
    DqnResult r = train_dqn_codebook16(env, cfg.dqn, seed);
    save_network((out_dir / (stem + ".rbw")).string(), r.params, "dqn16");
    db = build_database_codebook16(r.params, env, cfg.database.candidates);
    report = std::move(r.report);
  } else if (agent == "qlearning") {
    QlResult r = train_qlearning(env, cfg.qlearning, seed);
    save_qtable((out_dir / (stem + ".rbq")).string(), r.table, "qlearning");
    db = build_database_qtable(r.table, env, cfg.database.candidates);
    report = std::move(r.report);
  } else {
    throw CLI::ValidationError("--agent", "train supports dqn, qlearning, dqn16");
  }

  write_report_json((out_dir / (stem + "_report.json")).string(), report, hash);
  write_policy_csv((out_dir / (stem + "_policy.csv")).string(),
                   provenance("train", hash, seed), report, env);
  db.save((out_dir / (stem + "_db.txt")).string(), provenance("train", hash, seed));
  std::cout << "train: " << agent << " seed " << seed << " avg reward "
            << report.avg_reward_db << " dB; artifacts in " << out_dir.string()
            << "\n";
  return 0;
}

int cmd_eval(const CommonOpts& o, const std::string& weights_path) {
  const ExperimentConfig cfg = load_cfg(o);
  const std::string hash = config_hash(cfg);
  const fs::path out_dir = resolve_out_dir(o, cfg);
  const BeamEnv env = make_env(cfg);
  const std::string stem = fs::path(weights_path).stem().string();

  Rollout rollout;
  std::string tag;
  if (fs::path(weights_path).extension() == ".rbq") {
    LoadedQTable lt = load_qtable(weights_path);
    tag = lt.tag;
    if (lt.table.n_states() != env.n_bins())
      throw ConfigError("table was trained for a different bin count");
    rollout = greedy_rollout_qtable(lt.table, env);
  } else {
    LoadedNetwork ln = load_network(weights_path);
    tag = ln.tag;
    if (ln.tag == "dqn16")
      rollout = greedy_rollout_codebook16(ln.params, env);
    else
      rollout = greedy_rollout_dqn(ln.params, env);
  }

  write_rsp_csv((out_dir / (stem + "_eval_rsp.csv")).string(),
                provenance("eval", hash, std::nullopt), rollout.policy,
                env.tx_beam(), cfg.scenario, cfg.rrh_panel, cfg.mr_panel);
  write_trace_csv((out_dir / (stem + "_eval_trace.csv")).string(),
                  provenance("eval", hash, std::nullopt), rollout.trace);
  std::cout << "eval: " << tag << " avg reward " << rollout.avg_reward_db
            << " dB; artifacts in " << out_dir.string() << "\n";
  return 0;
}

int cmd_oracle(const CommonOpts& o, std::optional<double> step_override) {
  const ExperimentConfig cfg = load_cfg(o);
  const std::string hash = config_hash(cfg);
  const fs::path out_dir = resolve_out_dir(o, cfg);
  const double step = step_override.value_or(cfg.oracle.step_deg);
  const OracleResult res =
      grid_search(cfg.scenario, cfg.rrh_panel, cfg.mr_panel, cfg.env.tx_beam,
                  cfg.steering, step, cfg.oracle.max_points, cfg.oracle.threads);
  write_oracle_csv((out_dir / "oracle.csv").string(),
                   provenance("oracle", hash, std::nullopt), res);
  std::cout << "oracle: " << res.entries.size() << " bins at " << step
            << " deg; wrote " << (out_dir / "oracle.csv").string() << "\n";
  return 0;
}

int cmd_cycles(const CommonOpts& o, const std::string& db_path) {
  const ExperimentConfig cfg = load_cfg(o);
  const std::string hash = config_hash(cfg);
  const fs::path out_dir = resolve_out_dir(o, cfg);
  const std::uint64_t seed = resolve_seeds(o, cfg).front();
  const BeamEnv env = make_env(cfg);

  BeamDatabase db = BeamDatabase::load(db_path);
  const CycleStats stats = run_test_cycles(db, env, cfg.database.cycles,
                                           cfg.database.utilization_prob, seed);
  const std::string stem = fs::path(db_path).stem().string();
  write_cycle_stats_csv((out_dir / (stem + "_cycles.csv")).string(),
                        provenance("cycles", hash, seed), stats);
  std::cout << "cycles: " << stats.cycles << " cycles over " << env.n_bins()
            << " bins; artifacts in " << out_dir.string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"mm-wave train-ground receive-beam experiment driver"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::vector<std::string> agents;
  std::string train_agent;
  std::string weights_path;
  std::string db_path;
  std::optional<double> oracle_step;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON experiment config");
    sub->add_option("--out", opts.out_dir,
                    "output directory (overrides RAILBEAM_OUT and the config)");
    sub->add_option("--seed", opts.seed, "seed overriding the config seed list");
  };

  CLI::App* sim = app.add_subcommand("simulate",
                                     "run agents end-to-end and emit RSP curves");
  add_common(sim);
  sim->add_option("--agent", agents, "agents to run (default: all five)");

  CLI::App* train = app.add_subcommand("train", "train one agent and save weights");
  add_common(train);
  train->add_option("--agent", train_agent, "dqn, qlearning or dqn16")->required();

  CLI::App* eval = app.add_subcommand("eval", "greedy rollout from saved weights");
  add_common(eval);
  eval->add_option("--weights", weights_path, "weight/table file from train")
      ->required();

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive per-bin grid search");
  add_common(oracle);
  oracle->add_option("--step", oracle_step, "grid step in degrees");

  CLI::App* cycles =
      app.add_subcommand("cycles", "utilization/exploration test cycles");
  add_common(cycles);
  cycles->add_option("--database", db_path, "database file from train")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(opts, agents);
    if (train->parsed()) return cmd_train(opts, train_agent);
    if (eval->parsed()) return cmd_eval(opts, weights_path);
    if (oracle->parsed()) return cmd_oracle(opts, oracle_step);
    if (cycles->parsed()) return cmd_cycles(opts, db_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
