#include "railbeam/agents.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>

#include <json.hpp>

#include "railbeam/csv.hpp"

namespace railbeam {

namespace {

// Position feature normalized to [0,1]; computed arithmetically so the
// one-past-the-end bin of a terminal transition is representable.
double bin_feature(int bin, const BeamEnv& env) {
  const double x = (bin - 1) * 2.0 * env.scenario().bin_radius_m;
  return x / env.scenario().rail_length_m;
}

int argmax_index(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

using ApplyAction = StepOutcome (*)(const BeamEnv&, const EnvState&, int,
                                    const void*);

struct TrainLoopSpec {
  int n_actions = 0;
  ApplyAction apply = nullptr;
  const void* ctx = nullptr;
};

StepOutcome apply_relative(const BeamEnv& env, const EnvState& s, int a,
                           const void*) {
  return env.step(s, env.actions()[static_cast<std::size_t>(a)]);
}

StepOutcome apply_codebook(const BeamEnv& env, const EnvState& s, int a,
                           const void* ctx) {
  const auto* book = static_cast<const std::array<BeamDirection, 16>*>(ctx);
  return env.step_to_beam(s, (*book)[static_cast<std::size_t>(a)]);
}

DqnResult train_dqn_loop(const BeamEnv& env, const DqnHyper& h,
                         std::uint64_t seed, const TrainLoopSpec& spec,
                         const std::string& agent_name) {
  const auto t0 = std::chrono::steady_clock::now();
  if (h.episodes < 1) throw ConfigError("episodes must be >= 1");
  if (h.target_sync_period < 1) throw ConfigError("target_sync_period must be >= 1");

  std::vector<std::size_t> sizes;
  sizes.push_back(1);
  sizes.insert(sizes.end(), h.hidden.begin(), h.hidden.end());
  sizes.push_back(static_cast<std::size_t>(spec.n_actions));

  QNetworkParams net =
      QNetworkParams::init(sizes, h.activation, seed ^ 0x9e3779b97f4a7c15ull);
  QNetworkParams target = sync_target(net);
  ReplayBuffer replay(h.replay_capacity, h.batch_size);
  std::mt19937_64 rng(seed);

  Gradients grads = Gradients::zeros_like(net);
  TdWorkspace ws;
  std::vector<Transition> batch;
  std::uint64_t grad_steps = 0;

  TrainReport report;
  report.agent = agent_name;
  report.seed = seed;
  report.episodes = h.episodes;
  report.episode_return.reserve(h.episodes);

  for (int ep = 1; ep <= h.episodes; ++ep) {
    const double eps = h.eps.at(ep, h.episodes);
    EnvState s = env.reset();
    double ep_return = 0.0;
    bool done = false;
    while (!done) {
      const double feat = bin_feature(s.bin, env);
      int a;
      if (uniform01(rng) < eps) {
        a = static_cast<int>(uniform_index(rng, spec.n_actions));
      } else {
        const double in[1] = {feat};
        a = argmax_index(forward_ws(net, in, ws));
      }
      const StepOutcome out = spec.apply(env, s, a, spec.ctx);
      replay.push({feat, a, out.reward_db, bin_feature(out.next.bin, env),
                   out.done});
      ep_return += out.reward_db;

      if (replay.ready()) {
        replay.sample(rng, batch);
        grads.reset();
        const double loss = td_loss_grad(net, target, batch, h.discount, grads, ws);
        if (!std::isfinite(loss))
          throw DomainError(agent_name + " training diverged: non-finite loss");
        sgd_step(net, grads, h.learning_rate);
        ++grad_steps;
        if (grad_steps % static_cast<std::uint64_t>(h.target_sync_period) == 0)
          target = sync_target(net);
      }
      s = out.next;
      done = out.done;
    }
    report.episode_return.push_back(ep_return);
  }

  const Rollout rollout = spec.ctx == nullptr
                              ? greedy_rollout_dqn(net, env)
                              : greedy_rollout_codebook16(net, env);
  report.policy = rollout.policy;
  report.policy_rsp_dbm = rollout.rsp_dbm;
  report.policy_action_ids = rollout.action_ids;
  report.avg_reward_db = rollout.avg_reward_db;
  report.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return DqnResult{std::move(net), std::move(report)};
}

Rollout rollout_with(const BeamEnv& env, const TrainLoopSpec& spec,
                     const std::function<int(int bin)>& pick_action) {
  Rollout r;
  EnvState s = env.reset();
  double sum = 0.0;
  bool done = false;
  while (!done) {
    const int a = pick_action(s.bin);
    const StepOutcome out = spec.apply(env, s, a, spec.ctx);
    r.trace.push_back({s.bin, s.bin, a + 1, out.next.beam.theta_deg,
                       out.next.beam.phi_deg, out.reward_db, out.rsp_dbm});
    r.policy.push_back(out.next.beam);
    r.rsp_dbm.push_back(out.rsp_dbm);
    r.action_ids.push_back(a + 1);
    sum += out.reward_db;
    s = out.next;
    done = out.done;
  }
  r.avg_reward_db = sum / static_cast<double>(env.n_bins());
  return r;
}

} // namespace

double EpsSchedule::at(int episode, int total_episodes) const {
  if (total_episodes < 1 || episode < 1) throw ConfigError("bad episode index");
  const double horizon = decay_frac * total_episodes;
  if (horizon <= 1.0) return end;
  const double t = std::min(1.0, (episode - 1) / (horizon - 1.0));
  return start + (end - start) * t;
}

QTable::QTable(int n_states, int n_actions)
    : n_states_(n_states), n_actions_(n_actions) {
  if (n_states < 1 || n_actions < 1)
    throw ConfigError("QTable dimensions must be positive");
  q_.assign(static_cast<std::size_t>(n_states) * n_actions, 0.0);
}

double QTable::at(int s, int a) const {
  if (s < 0 || s >= n_states_ || a < 0 || a >= n_actions_)
    throw DomainError("QTable index out of range");
  return q_[static_cast<std::size_t>(s) * n_actions_ + a];
}

double& QTable::at(int s, int a) {
  if (s < 0 || s >= n_states_ || a < 0 || a >= n_actions_)
    throw DomainError("QTable index out of range");
  return q_[static_cast<std::size_t>(s) * n_actions_ + a];
}

int QTable::argmax(int s) const {
  const double* row = &q_[static_cast<std::size_t>(s) * n_actions_];
  return static_cast<int>(std::max_element(row, row + n_actions_) - row);
}

double QTable::max_value(int s) const { return at(s, argmax(s)); }

void QTable::update(int s, int a, double r, int s_next, bool terminal,
                    double lr, double discount) {
  double target = r;
  if (!terminal) target += discount * max_value(s_next);
  double& q = at(s, a);
  q += lr * (target - q);
}

DqnResult train_dqn(const BeamEnv& env, const DqnHyper& h, std::uint64_t seed) {
  TrainLoopSpec spec{9, apply_relative, nullptr};
  return train_dqn_loop(env, h, seed, spec, "dqn");
}

std::array<BeamDirection, 16> codebook16() {
  std::array<BeamDirection, 16> book{};
  for (int ti = 0; ti < 4; ++ti)
    for (int pi = 0; pi < 4; ++pi)
      book[static_cast<std::size_t>(ti * 4 + pi)] =
          BeamDirection{-1.0 + ti / 3.0, -11.0 + pi * 11.0 / 3.0};
  return book;
}

DqnResult train_dqn_codebook16(const BeamEnv& env, const DqnHyper& h,
                               std::uint64_t seed) {
  static const std::array<BeamDirection, 16> book = codebook16();
  TrainLoopSpec spec{16, apply_codebook, &book};
  return train_dqn_loop(env, h, seed, spec, "dqn16");
}

QlResult train_qlearning(const BeamEnv& env, const QlHyper& h, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  if (h.episodes < 1) throw ConfigError("episodes must be >= 1");
  const int n = env.n_bins();
  QTable table(n, 9);
  std::mt19937_64 rng(seed);

  TrainReport report;
  report.agent = "qlearning";
  report.seed = seed;
  report.episodes = h.episodes;
  report.episode_return.reserve(h.episodes);

  for (int ep = 1; ep <= h.episodes; ++ep) {
    const double eps = h.eps.at(ep, h.episodes);
    EnvState s = env.reset();
    double ep_return = 0.0;
    bool done = false;
    while (!done) {
      const int state = s.bin - 1;
      int a;
      if (uniform01(rng) < eps)
        a = static_cast<int>(uniform_index(rng, 9));
      else
        a = table.argmax(state);
      const StepOutcome out = env.step(s, env.actions()[static_cast<std::size_t>(a)]);
      table.update(state, a, out.reward_db, out.done ? 0 : out.next.bin - 1,
                   out.done, h.learning_rate, h.discount);
      ep_return += out.reward_db;
      s = out.next;
      done = out.done;
    }
    report.episode_return.push_back(ep_return);
  }

  const Rollout rollout = greedy_rollout_qtable(table, env);
  report.policy = rollout.policy;
  report.policy_rsp_dbm = rollout.rsp_dbm;
  report.policy_action_ids = rollout.action_ids;
  report.avg_reward_db = rollout.avg_reward_db;
  report.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return QlResult{std::move(table), std::move(report)};
}

GammaGreedyResult run_gamma_greedy(const BeamEnv& env) {
  const double sb = env.sigma_b_deg();
  const double offsets[3] = {-sb, 0.0, +sb};
  const int n = env.n_bins();

  GammaGreedyResult res;
  res.beams.reserve(n);
  res.rsp.values_dbm.reserve(n);
  res.rsp.positions_m.reserve(n);

  BeamDirection prev{0.0, 0.0};
  for (int bin = 1; bin <= n; ++bin) {
    double best = -200.0; // initial P_r,max
    BeamDirection best_beam = prev;
    for (double g1 : offsets) {
      for (double g2 : offsets) {
        const BeamDirection cand = env.limits().clamp(
            BeamDirection{prev.theta_deg + g1, prev.phi_deg + g2});
        const double r = env.measure(bin, cand).p_r_dbm;
        if (r > best) {
          best = r;
          best_beam = cand;
        }
      }
    }
    res.beams.push_back(best_beam);
    res.rsp.values_dbm.push_back(best);
    res.rsp.positions_m.push_back(env.position(bin));
    if (best > env.scenario().tx_power_dbm) res.rsp.power_violations.push_back(bin);
    prev = best_beam;
  }
  return res;
}

RspVector run_fba(const BeamEnv& env) {
  const std::vector<BeamDirection> policy(static_cast<std::size_t>(env.n_bins()),
                                          env.benchmark_beam());
  return rsp_vector(policy, env.tx_beam(), env.scenario(), env.rrh_panel(),
                    env.mr_panel());
}

Rollout greedy_rollout_dqn(const QNetworkParams& p, const BeamEnv& env) {
  TrainLoopSpec spec{9, apply_relative, nullptr};
  TdWorkspace ws;
  return rollout_with(env, spec, [&](int bin) {
    const double in[1] = {bin_feature(bin, env)};
    return argmax_index(forward_ws(p, in, ws));
  });
}

Rollout greedy_rollout_codebook16(const QNetworkParams& p, const BeamEnv& env) {
  static const std::array<BeamDirection, 16> book = codebook16();
  TrainLoopSpec spec{16, apply_codebook, &book};
  TdWorkspace ws;
  return rollout_with(env, spec, [&](int bin) {
    const double in[1] = {bin_feature(bin, env)};
    return argmax_index(forward_ws(p, in, ws));
  });
}

Rollout greedy_rollout_qtable(const QTable& t, const BeamEnv& env) {
  TrainLoopSpec spec{t.n_actions(), apply_relative, nullptr};
  return rollout_with(env, spec, [&](int bin) { return t.argmax(bin - 1); });
}

namespace {
constexpr char kQTableMagic[8] = {'R', 'B', 'Q', 'T', '0', '0', '0', '1'};
}

void save_qtable(const std::string& path, const QTable& t, const std::string& tag) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(kQTableMagic, sizeof(kQTableMagic));
  const auto tag_len = static_cast<std::uint8_t>(tag.size());
  out.write(reinterpret_cast<const char*>(&tag_len), 1);
  out.write(tag.data(), tag_len);
  const std::uint32_t ns = static_cast<std::uint32_t>(t.n_states());
  const std::uint32_t na = static_cast<std::uint32_t>(t.n_actions());
  out.write(reinterpret_cast<const char*>(&ns), sizeof(ns));
  out.write(reinterpret_cast<const char*>(&na), sizeof(na));
  for (int s = 0; s < t.n_states(); ++s)
    for (int a = 0; a < t.n_actions(); ++a) {
      const double v = t.at(s, a);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  if (!out) throw IoError("short write: " + path);
}

LoadedQTable load_qtable(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open table file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kQTableMagic, sizeof(magic)) != 0)
    throw ConfigError("table file header/version mismatch: " + path);
  std::uint8_t tag_len = 0;
  in.read(reinterpret_cast<char*>(&tag_len), 1);
  std::string tag(tag_len, '\0');
  in.read(tag.data(), tag_len);
  std::uint32_t ns = 0, na = 0;
  in.read(reinterpret_cast<char*>(&ns), sizeof(ns));
  in.read(reinterpret_cast<char*>(&na), sizeof(na));
  if (!in || ns == 0 || na == 0)
    throw ConfigError("table file corrupt: " + path);
  LoadedQTable lt{QTable(static_cast<int>(ns), static_cast<int>(na)), tag};
  for (std::uint32_t s = 0; s < ns; ++s)
    for (std::uint32_t a = 0; a < na; ++a) {
      double v = 0.0;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      if (!in) throw IoError("table file truncated: " + path);
      lt.table.at(static_cast<int>(s), static_cast<int>(a)) = v;
    }
  return lt;
}

std::string train_report_json(const TrainReport& r, const std::string& config_hash) {
  nlohmann::json j;
  j["agent"] = r.agent;
  j["seed"] = r.seed;
  j["config"] = config_hash;
  j["episodes"] = r.episodes;
  j["avg_reward_db"] = r.avg_reward_db;
  j["episode_return"] = r.episode_return;
  return j.dump(2);
}

void write_report_json(const std::string& path, const TrainReport& r,
                       const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << train_report_json(r, config_hash) << "\n";
}

void write_policy_csv(const std::string& path, const std::string& provenance,
                      const TrainReport& r, const BeamEnv& env) {
  auto out = csvio::open_csv(path, provenance);
  out << "bin_index,position_m,action_id,theta_b_deg,phi_b_deg,rsp_dbm,reward_db\n";
  for (std::size_t i = 0; i < r.policy.size(); ++i) {
    const int bin = static_cast<int>(i) + 1;
    out << bin << ',' << csvio::fmt(env.position(bin)) << ','
        << r.policy_action_ids[i] << ',' << csvio::fmt(r.policy[i].theta_deg)
        << ',' << csvio::fmt(r.policy[i].phi_deg) << ','
        << csvio::fmt(r.policy_rsp_dbm[i]) << ','
        << csvio::fmt(r.policy_rsp_dbm[i] - env.benchmark_rsp_dbm(bin)) << '\n';
  }
}

} // namespace railbeam
