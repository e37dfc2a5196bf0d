#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "railbeam/env.hpp"
#include "railbeam/nn.hpp"

// The five receive-beam policies: the proposed DQN, tabular Q-learning,
// the per-bin greedy local search, the fixed-beam baseline, and the
// 16-beam-codebook DQN.
namespace railbeam {

/// Exploration probability, linearly annealed from start to end over the
/// first decay_frac of the episode budget, then held.
struct EpsSchedule {
  double start = 1.0;
  double end = 0.05;
  double decay_frac = 0.6;

  double at(int episode, int total_episodes) const;
};

struct DqnHyper {
  std::vector<std::size_t> hidden{64, 64};
  Activation activation = Activation::Tanh;
  std::size_t replay_capacity = 10000;
  std::size_t batch_size = 32;
  int target_sync_period = 100;
  double learning_rate = 1e-3;
  double discount = 0.9;
  EpsSchedule eps;
  int episodes = 500;
};

struct QlHyper {
  double learning_rate = 0.1;
  double discount = 0.9;
  EpsSchedule eps;
  int episodes = 500;
};

struct TrainReport {
  std::string agent;
  std::uint64_t seed = 0;
  int episodes = 0;
  std::vector<double> episode_return;   // per-episode reward sum, dB
  std::vector<BeamDirection> policy;    // final greedy beam per bin
  std::vector<double> policy_rsp_dbm;   // RSP of that policy per bin
  std::vector<int> policy_action_ids;
  double avg_reward_db = 0.0; // mean over bins of (policy - benchmark) RSP
  double wall_clock_s = 0.0;  // informational; kept out of serialized output
};

/// Q values over (bin, action) with the standard temporal-difference
/// update.
class QTable {
public:
  QTable(int n_states, int n_actions);

  double at(int state, int action) const;
  double& at(int state, int action);
  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }

  /// Lowest-index action among the maxima.
  int argmax(int state) const;
  double max_value(int state) const;

  /// Q(s,a) += lr * (r + discount * max_a' Q(s',a') - Q(s,a));
  /// the bootstrap term is dropped on terminal transitions.
  void update(int state, int action, double reward, int next_state,
              bool terminal, double lr, double discount);

private:
  int n_states_;
  int n_actions_;
  std::vector<double> q_;
};

void save_qtable(const std::string& path, const QTable& t, const std::string& tag);

struct LoadedQTable {
  QTable table;
  std::string tag;
};

LoadedQTable load_qtable(const std::string& path);

struct DqnResult {
  QNetworkParams params;
  TrainReport report;
};

struct QlResult {
  QTable table;
  TrainReport report;
};

/// Episode loop with replay memory, target copies and per-step SGD.
/// Deterministic for a fixed seed. Throws DomainError when the loss
/// stops being finite.
DqnResult train_dqn(const BeamEnv& env, const DqnHyper& h, std::uint64_t seed);

QlResult train_qlearning(const BeamEnv& env, const QlHyper& h, std::uint64_t seed);

/// The 4x4 absolute beam codebook spanning theta in [-1,0] deg and phi
/// in [-11,0] deg, each interval divided into three equal parts.
std::array<BeamDirection, 16> codebook16();

/// Same training loop as train_dqn but actions set the beam to a
/// codebook entry directly.
DqnResult train_dqn_codebook16(const BeamEnv& env, const DqnHyper& h,
                               std::uint64_t seed);

struct GammaGreedyResult {
  std::vector<BeamDirection> beams;
  RspVector rsp;
};

/// Per-bin search over the nine (+-sigma_B, 0) offsets from the previous
/// bin's beam, keeping the first strict maximum. The caller builds the
/// environment on the finer-bin scenario this baseline uses.
GammaGreedyResult run_gamma_greedy(const BeamEnv& env);

/// Receive beam pinned at the benchmark direction for every bin.
RspVector run_fba(const BeamEnv& env);

struct Rollout {
  std::vector<TraceRow> trace;
  std::vector<BeamDirection> policy;
  std::vector<double> rsp_dbm;
  std::vector<int> action_ids;
  double avg_reward_db = 0.0;
};

Rollout greedy_rollout_dqn(const QNetworkParams& p, const BeamEnv& env);
Rollout greedy_rollout_codebook16(const QNetworkParams& p, const BeamEnv& env);
Rollout greedy_rollout_qtable(const QTable& t, const BeamEnv& env);

/// Report JSON (wall-clock excluded so fixed-seed outputs stay
/// byte-identical).
std::string train_report_json(const TrainReport& r, const std::string& config_hash);

void write_report_json(const std::string& path, const TrainReport& r,
                       const std::string& config_hash);

void write_policy_csv(const std::string& path, const std::string& provenance,
                      const TrainReport& r, const BeamEnv& env);

} // namespace railbeam
