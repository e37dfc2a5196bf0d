#pragma once

#include <span>
#include <string>
#include <vector>

#include "railbeam/antenna.hpp"
#include "railbeam/channel.hpp"

// Link budget: transmit power plus element and array gains on both
// sides, minus path loss.
namespace railbeam {

struct LinkBudgetBreakdown {
  double p_t_dbm = 0.0;
  double a_e_t_db = 0.0; // RRH element gain
  double a_e_r_db = 0.0; // MR element gain
  double a_b_t_db = 0.0; // RRH array gain
  double a_b_r_db = 0.0; // MR array gain
  double pl_db = 0.0;
  double p_r_dbm = 0.0;
};

/// Received signal power at rail position x for a given receive beam.
/// The transmit beam is fixed per scenario (0/0 by default).
LinkBudgetBreakdown rsp(double x, const BeamDirection& rx_beam,
                        const BeamDirection& tx_beam, const ScenarioConfig& cfg,
                        const PanelConfig& rrh_panel, const PanelConfig& mr_panel);

struct RspVector {
  std::vector<double> values_dbm;
  std::vector<double> positions_m;
  /// 1-based bins where P_r exceeded P_t (constraint monitor; reported,
  /// never silently accepted).
  std::vector<int> power_violations;
};

/// One RSP entry per location bin, bin n evaluated with policy[n-1].
RspVector rsp_vector(std::span<const BeamDirection> policy,
                     const BeamDirection& tx_beam, const ScenarioConfig& cfg,
                     const PanelConfig& rrh_panel, const PanelConfig& mr_panel);

/// (1 - P_b) * ||P_R||_2 over the dBm entries.
double objective(const RspVector& v, const ScenarioConfig& cfg);

/// Arithmetic mean of the dBm entries; the quantity the evaluation
/// actually compares.
double mean_rsp_dbm(const RspVector& v);

/// Per-bin curve with full breakdown columns.
void write_rsp_csv(const std::string& path, const std::string& provenance,
                   std::span<const BeamDirection> policy,
                   const BeamDirection& tx_beam, const ScenarioConfig& cfg,
                   const PanelConfig& rrh_panel, const PanelConfig& mr_panel);

} // namespace railbeam
