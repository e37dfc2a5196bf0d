#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "railbeam/link.hpp"

// Episodic process over the location bins: the state exposed to agents
// is the bin alone, actions adjust the receive beam relative to the
// previous bin's beam, and the reward is the RSP gap against a fixed
// benchmark beam.
namespace railbeam {

/// One of the nine relative adjustments (id 1..9). a_1 keeps the beam.
struct Action {
  int id = 1;
  double dtheta_deg = 0.0;
  double dphi_deg = 0.0;
};

/// The action table for step size sigma_B, in the published order.
std::array<Action, 9> action_table(double sigma_b_deg);

struct EnvState {
  int bin = 1; // 1-based
  BeamDirection beam;
};

struct StepOutcome {
  double reward_db = 0.0;
  EnvState next;
  double rsp_dbm = 0.0;
  bool done = false;
};

/// Environment bound to a scenario. Step computations are pure given the
/// construction parameters; one instance may serve concurrent readers as
/// long as each episode uses its own EnvState.
class BeamEnv {
public:
  BeamEnv(ScenarioConfig cfg, PanelConfig rrh_panel, PanelConfig mr_panel,
          SteeringLimits limits, BeamDirection benchmark_beam,
          BeamDirection tx_beam, double sigma_b_deg);

  /// Episode start: bin 1, beam (0,0).
  EnvState reset() const;

  /// Apply a relative action at the current bin. Throws DomainError when
  /// stepping a finished episode.
  StepOutcome step(const EnvState& s, const Action& a) const;

  /// Apply an absolute beam (codebook semantics).
  StepOutcome step_to_beam(const EnvState& s, const BeamDirection& beam) const;

  int n_bins() const { return n_bins_; }
  double position(int bin) const;
  /// Benchmark-beam RSP at a bin (precomputed).
  double benchmark_rsp_dbm(int bin) const;

  const ScenarioConfig& scenario() const { return cfg_; }
  const PanelConfig& rrh_panel() const { return rrh_; }
  const PanelConfig& mr_panel() const { return mr_; }
  const SteeringLimits& limits() const { return limits_; }
  const BeamDirection& benchmark_beam() const { return benchmark_; }
  const BeamDirection& tx_beam() const { return tx_beam_; }
  double sigma_b_deg() const { return sigma_b_deg_; }
  const std::array<Action, 9>& actions() const { return actions_; }

  /// Full link budget at a bin for an arbitrary receive beam.
  LinkBudgetBreakdown measure(int bin, const BeamDirection& rx_beam) const;

private:
  ScenarioConfig cfg_;
  PanelConfig rrh_;
  PanelConfig mr_;
  SteeringLimits limits_;
  BeamDirection benchmark_;
  BeamDirection tx_beam_;
  double sigma_b_deg_;
  int n_bins_;
  std::array<Action, 9> actions_;
  std::vector<double> positions_;
  std::vector<double> benchmark_rsp_;
};

/// Sum of alpha^t * R_t over the sequence; empty -> 0.
double discounted_return(std::span<const double> rewards, double alpha);

/// One row per step: step, bin, action id, beam, reward, rsp.
struct TraceRow {
  int step = 0;
  int bin = 0;
  int action_id = 0;
  double theta_b_deg = 0.0;
  double phi_b_deg = 0.0;
  double reward_db = 0.0;
  double rsp_dbm = 0.0;
};

void write_trace_csv(const std::string& path, const std::string& provenance,
                     std::span<const TraceRow> rows);

} // namespace railbeam
