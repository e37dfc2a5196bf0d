#include "railbeam/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace railbeam {

namespace {

using nlohmann::json;

// Strict object reader: every key must be consumed, leftovers are
// reported with their path so typos do not silently fall back to
// defaults.
class ObjReader {
public:
  ObjReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object())
      throw ConfigError(path_ + ": expected a JSON object");
  }

  ~ObjReader() = default;

  template <class T>
  void get(const char* key, T& out) {
    auto it = j_.find(key);
    if (it == j_.end()) return;
    seen_.insert(key);
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  bool has(const char* key) {
    auto it = j_.find(key);
    if (it != j_.end()) {
      seen_.insert(key);
      return true;
    }
    return false;
  }

  const json& sub(const char* key) { return j_.at(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError(path_ + "." + it.key() + ": unknown key");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_beam(const json& j, const std::string& path, BeamDirection& b) {
  ObjReader r(j, path);
  r.get("theta_deg", b.theta_deg);
  r.get("phi_deg", b.phi_deg);
  r.finish();
}

void read_scenario(const json& j, ScenarioConfig& s) {
  ObjReader r(j, "scenario");
  r.get("rail_length_m", s.rail_length_m);
  r.get("bin_radius_m", s.bin_radius_m);
  r.get("rrh_offset_m", s.rrh_offset_m);
  r.get("d_min_m", s.d_min_m);
  r.get("d_s_m", s.d_s_m);
  r.get("rrh_height_m", s.rrh_height_m);
  r.get("mr_height_m", s.mr_height_m);
  r.get("carrier_hz", s.carrier_hz);
  r.get("tx_power_dbm", s.tx_power_dbm);
  r.get("avg_building_height_m", s.avg_building_height_m);
  r.get("blockage_prob", s.blockage_prob);
  r.finish();
}

void read_panel(const json& j, const std::string& path, PanelConfig& p,
                bool& orientation_overridden) {
  ObjReader r(j, path);
  r.get("n_h", p.n_h);
  r.get("n_v", p.n_v);
  r.get("d_v_over_lambda", p.d_v_over_lambda);
  r.get("d_h_over_lambda", p.d_h_over_lambda);
  r.get("theta_3db_deg", p.theta_3db_deg);
  r.get("phi_3db_deg", p.phi_3db_deg);
  r.get("sla_v_db", p.sla_v_db);
  r.get("a_max_db", p.a_max_db);
  r.get("element_gain_max_dbi", p.element_gain_max_dbi);
  if (r.has("orientation")) {
    ObjReader o(r.sub("orientation"), path + ".orientation");
    o.get("bearing_deg", p.orientation.bearing_deg);
    o.get("downtilt_deg", p.orientation.downtilt_deg);
    o.finish();
    orientation_overridden = true;
  }
  r.finish();
}

void read_eps(ObjReader& r, EpsSchedule& e) {
  r.get("epsilon_start", e.start);
  r.get("epsilon_end", e.end);
  r.get("epsilon_decay_frac", e.decay_frac);
}

json beam_json(const BeamDirection& b) {
  return json{{"theta_deg", b.theta_deg}, {"phi_deg", b.phi_deg}};
}

} // namespace

void ExperimentConfig::validate() const {
  scenario.validate();
  rrh_panel.validate();
  mr_panel.validate();
  steering.validate();
  if (env.sigma_b_deg <= 0.0) throw ConfigError("env.sigma_b_deg must be > 0");
  if (dqn.discount <= 0.0 || dqn.discount > 1.0)
    throw ConfigError("dqn.discount must lie in (0,1]");
  if (qlearning.discount <= 0.0 || qlearning.discount > 1.0)
    throw ConfigError("qlearning.discount must lie in (0,1]");
  if (dqn.learning_rate <= 0.0) throw ConfigError("dqn.learning_rate must be > 0");
  if (dqn.hidden.empty()) throw ConfigError("dqn.hidden must not be empty");
  if (gamma_greedy_bin_radius_m <= 0.0)
    throw ConfigError("gamma_greedy.bin_radius_m must be > 0");
  if (database.candidates < 1) throw ConfigError("database.candidates must be >= 1");
  if (database.utilization_prob < 0.0 || database.utilization_prob > 1.0)
    throw ConfigError("database.utilization_prob must lie in [0,1]");
  if (database.cycles < 1) throw ConfigError("database.cycles must be >= 1");
  if (oracle.step_deg <= 0.0) throw ConfigError("oracle.step_deg must be > 0");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  gamma_greedy_scenario().validate();
}

ScenarioConfig ExperimentConfig::gamma_greedy_scenario() const {
  ScenarioConfig s = scenario;
  s.bin_radius_m = gamma_greedy_bin_radius_m;
  return s;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.rrh_panel = default_rrh_panel();
  cfg.mr_panel = default_mr_panel();
  cfg.rrh_panel.orientation = default_rrh_orientation(cfg.scenario);
  cfg.mr_panel.orientation = default_mr_orientation(cfg.scenario);
  return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg = default_config();
  if (text.empty()) {
    cfg.validate();
    return cfg;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  ObjReader r(j, origin);
  if (r.has("scenario")) read_scenario(r.sub("scenario"), cfg.scenario);
  if (r.has("rrh_panel"))
    read_panel(r.sub("rrh_panel"), "rrh_panel", cfg.rrh_panel,
               cfg.rrh_orientation_overridden);
  if (r.has("mr_panel"))
    read_panel(r.sub("mr_panel"), "mr_panel", cfg.mr_panel,
               cfg.mr_orientation_overridden);
  if (r.has("steering")) {
    ObjReader s(r.sub("steering"), "steering");
    s.get("theta_min_deg", cfg.steering.theta_min_deg);
    s.get("theta_max_deg", cfg.steering.theta_max_deg);
    s.get("phi_min_deg", cfg.steering.phi_min_deg);
    s.get("phi_max_deg", cfg.steering.phi_max_deg);
    s.finish();
  }
  if (r.has("env")) {
    ObjReader e(r.sub("env"), "env");
    e.get("sigma_b_deg", cfg.env.sigma_b_deg);
    if (e.has("benchmark_beam"))
      read_beam(e.sub("benchmark_beam"), "env.benchmark_beam", cfg.env.benchmark_beam);
    if (e.has("tx_beam")) read_beam(e.sub("tx_beam"), "env.tx_beam", cfg.env.tx_beam);
    e.finish();
  }
  if (r.has("dqn")) {
    ObjReader d(r.sub("dqn"), "dqn");
    d.get("hidden", cfg.dqn.hidden);
    d.get("replay_capacity", cfg.dqn.replay_capacity);
    d.get("batch_size", cfg.dqn.batch_size);
    d.get("target_sync_period", cfg.dqn.target_sync_period);
    d.get("learning_rate", cfg.dqn.learning_rate);
    d.get("discount", cfg.dqn.discount);
    d.get("episodes", cfg.dqn.episodes);
    read_eps(d, cfg.dqn.eps);
    std::string act;
    d.get("activation", act);
    if (!act.empty()) {
      if (act == "tanh")
        cfg.dqn.activation = Activation::Tanh;
      else if (act == "relu")
        cfg.dqn.activation = Activation::Relu;
      else
        throw ConfigError("dqn.activation: unknown value '" + act + "'");
    }
    d.finish();
  }
  if (r.has("qlearning")) {
    ObjReader q(r.sub("qlearning"), "qlearning");
    q.get("learning_rate", cfg.qlearning.learning_rate);
    q.get("discount", cfg.qlearning.discount);
    q.get("episodes", cfg.qlearning.episodes);
    read_eps(q, cfg.qlearning.eps);
    q.finish();
  }
  if (r.has("gamma_greedy")) {
    ObjReader g(r.sub("gamma_greedy"), "gamma_greedy");
    g.get("bin_radius_m", cfg.gamma_greedy_bin_radius_m);
    g.finish();
  }
  if (r.has("database")) {
    ObjReader d(r.sub("database"), "database");
    d.get("candidates", cfg.database.candidates);
    d.get("utilization_prob", cfg.database.utilization_prob);
    d.get("cycles", cfg.database.cycles);
    d.finish();
  }
  if (r.has("oracle")) {
    ObjReader o(r.sub("oracle"), "oracle");
    o.get("step_deg", cfg.oracle.step_deg);
    o.get("max_points", cfg.oracle.max_points);
    o.get("threads", cfg.oracle.threads);
    o.finish();
  }
  r.get("seeds", cfg.seeds);
  r.get("output_dir", cfg.output_dir);
  r.finish();

  // Orientations follow the (possibly overridden) scenario unless pinned.
  if (!cfg.rrh_orientation_overridden)
    cfg.rrh_panel.orientation = default_rrh_orientation(cfg.scenario);
  if (!cfg.mr_orientation_overridden)
    cfg.mr_panel.orientation = default_mr_orientation(cfg.scenario);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string config_json(const ExperimentConfig& cfg) {
  json j;
  j["scenario"] = {{"rail_length_m", cfg.scenario.rail_length_m},
                   {"bin_radius_m", cfg.scenario.bin_radius_m},
                   {"rrh_offset_m", cfg.scenario.rrh_offset_m},
                   {"d_min_m", cfg.scenario.d_min_m},
                   {"d_s_m", cfg.scenario.d_s_m},
                   {"rrh_height_m", cfg.scenario.rrh_height_m},
                   {"mr_height_m", cfg.scenario.mr_height_m},
                   {"carrier_hz", cfg.scenario.carrier_hz},
                   {"tx_power_dbm", cfg.scenario.tx_power_dbm},
                   {"avg_building_height_m", cfg.scenario.avg_building_height_m},
                   {"blockage_prob", cfg.scenario.blockage_prob}};
  const auto panel_json = [](const PanelConfig& p) {
    return json{{"n_h", p.n_h},
                {"n_v", p.n_v},
                {"d_v_over_lambda", p.d_v_over_lambda},
                {"d_h_over_lambda", p.d_h_over_lambda},
                {"theta_3db_deg", p.theta_3db_deg},
                {"phi_3db_deg", p.phi_3db_deg},
                {"sla_v_db", p.sla_v_db},
                {"a_max_db", p.a_max_db},
                {"element_gain_max_dbi", p.element_gain_max_dbi},
                {"orientation",
                 json{{"bearing_deg", p.orientation.bearing_deg},
                      {"downtilt_deg", p.orientation.downtilt_deg}}}};
  };
  j["rrh_panel"] = panel_json(cfg.rrh_panel);
  j["mr_panel"] = panel_json(cfg.mr_panel);
  j["steering"] = {{"theta_min_deg", cfg.steering.theta_min_deg},
                   {"theta_max_deg", cfg.steering.theta_max_deg},
                   {"phi_min_deg", cfg.steering.phi_min_deg},
                   {"phi_max_deg", cfg.steering.phi_max_deg}};
  j["env"] = {{"sigma_b_deg", cfg.env.sigma_b_deg},
              {"benchmark_beam", beam_json(cfg.env.benchmark_beam)},
              {"tx_beam", beam_json(cfg.env.tx_beam)}};
  j["dqn"] = {{"hidden", cfg.dqn.hidden},
              {"activation", cfg.dqn.activation == Activation::Tanh ? "tanh" : "relu"},
              {"replay_capacity", cfg.dqn.replay_capacity},
              {"batch_size", cfg.dqn.batch_size},
              {"target_sync_period", cfg.dqn.target_sync_period},
              {"learning_rate", cfg.dqn.learning_rate},
              {"discount", cfg.dqn.discount},
              {"episodes", cfg.dqn.episodes},
              {"epsilon_start", cfg.dqn.eps.start},
              {"epsilon_end", cfg.dqn.eps.end},
              {"epsilon_decay_frac", cfg.dqn.eps.decay_frac}};
  j["qlearning"] = {{"learning_rate", cfg.qlearning.learning_rate},
                    {"discount", cfg.qlearning.discount},
                    {"episodes", cfg.qlearning.episodes},
                    {"epsilon_start", cfg.qlearning.eps.start},
                    {"epsilon_end", cfg.qlearning.eps.end},
                    {"epsilon_decay_frac", cfg.qlearning.eps.decay_frac}};
  j["gamma_greedy"] = {{"bin_radius_m", cfg.gamma_greedy_bin_radius_m}};
  j["database"] = {{"candidates", cfg.database.candidates},
                   {"utilization_prob", cfg.database.utilization_prob},
                   {"cycles", cfg.database.cycles}};
  j["oracle"] = {{"step_deg", cfg.oracle.step_deg},
                 {"max_points", cfg.oracle.max_points},
                 {"threads", cfg.oracle.threads}};
  j["seeds"] = cfg.seeds;
  j["output_dir"] = cfg.output_dir;
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_json(cfg))));
  return buf;
}

BeamEnv make_env(const ExperimentConfig& cfg) {
  return BeamEnv(cfg.scenario, cfg.rrh_panel, cfg.mr_panel, cfg.steering,
                 cfg.env.benchmark_beam, cfg.env.tx_beam, cfg.env.sigma_b_deg);
}

BeamEnv make_gamma_env(const ExperimentConfig& cfg) {
  return BeamEnv(cfg.gamma_greedy_scenario(), cfg.rrh_panel, cfg.mr_panel,
                 cfg.steering, cfg.env.benchmark_beam, cfg.env.tx_beam,
                 cfg.env.sigma_b_deg);
}

} // namespace railbeam
