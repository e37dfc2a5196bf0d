#include "railbeam/env.hpp"

#include <cmath>

#include "railbeam/csv.hpp"

namespace railbeam {

std::array<Action, 9> action_table(double s) {
  return {{{1, 0.0, 0.0},
           {2, 0.0, +s},
           {3, +s, 0.0},
           {4, +s, +s},
           {5, 0.0, -s},
           {6, -s, 0.0},
           {7, -s, -s},
           {8, +s, -s},
           {9, -s, +s}}};
}

BeamEnv::BeamEnv(ScenarioConfig cfg, PanelConfig rrh_panel, PanelConfig mr_panel,
                 SteeringLimits limits, BeamDirection benchmark_beam,
                 BeamDirection tx_beam, double sigma_b_deg)
    : cfg_(cfg),
      rrh_(rrh_panel),
      mr_(mr_panel),
      limits_(limits),
      benchmark_(benchmark_beam),
      tx_beam_(tx_beam),
      sigma_b_deg_(sigma_b_deg),
      n_bins_(bin_count(cfg)),
      actions_(action_table(sigma_b_deg)) {
  cfg_.validate();
  rrh_.validate();
  mr_.validate();
  limits_.validate();
  if (sigma_b_deg_ <= 0.0) throw ConfigError("sigma_b_deg must be > 0");
  positions_.reserve(n_bins_);
  benchmark_rsp_.reserve(n_bins_);
  for (int b = 1; b <= n_bins_; ++b) {
    positions_.push_back(bin_position(b, cfg_));
    benchmark_rsp_.push_back(
        rsp(positions_.back(), benchmark_, tx_beam_, cfg_, rrh_, mr_).p_r_dbm);
  }
}

EnvState BeamEnv::reset() const { return EnvState{1, BeamDirection{0.0, 0.0}}; }

double BeamEnv::position(int bin) const {
  if (bin < 1 || bin > n_bins_) throw DomainError("bin out of range");
  return positions_[bin - 1];
}

double BeamEnv::benchmark_rsp_dbm(int bin) const {
  if (bin < 1 || bin > n_bins_) throw DomainError("bin out of range");
  return benchmark_rsp_[bin - 1];
}

LinkBudgetBreakdown BeamEnv::measure(int bin, const BeamDirection& rx_beam) const {
  return rsp(position(bin), rx_beam, tx_beam_, cfg_, rrh_, mr_);
}

StepOutcome BeamEnv::step(const EnvState& s, const Action& a) const {
  BeamDirection b{s.beam.theta_deg + a.dtheta_deg, s.beam.phi_deg + a.dphi_deg};
  return step_to_beam(s, b);
}

StepOutcome BeamEnv::step_to_beam(const EnvState& s, const BeamDirection& beam) const {
  if (s.bin < 1 || s.bin > n_bins_)
    throw DomainError("cannot step a finished episode");
  const BeamDirection clamped = limits_.clamp(beam);
  StepOutcome out;
  out.rsp_dbm = measure(s.bin, clamped).p_r_dbm;
  out.reward_db = out.rsp_dbm - benchmark_rsp_[s.bin - 1];
  out.next = EnvState{s.bin + 1, clamped};
  out.done = out.next.bin > n_bins_;
  return out;
}

double discounted_return(std::span<const double> rewards, double alpha) {
  if (alpha <= 0.0 || alpha > 1.0) throw ConfigError("discount must lie in (0,1]");
  double acc = 0.0;
  double w = 1.0;
  for (double r : rewards) {
    acc += w * r;
    w *= alpha;
  }
  return acc;
}

void write_trace_csv(const std::string& path, const std::string& provenance,
                     std::span<const TraceRow> rows) {
  auto out = csvio::open_csv(path, provenance);
  out << "step,bin,action_id,theta_b_deg,phi_b_deg,reward_db,rsp_dbm\n";
  for (const TraceRow& r : rows) {
    out << r.step << ',' << r.bin << ',' << r.action_id << ','
        << csvio::fmt(r.theta_b_deg) << ',' << csvio::fmt(r.phi_b_deg) << ','
        << csvio::fmt(r.reward_db) << ',' << csvio::fmt(r.rsp_dbm) << '\n';
  }
}

} // namespace railbeam
