#include "railbeam/link.hpp"

#include <cmath>

#include "railbeam/csv.hpp"

namespace railbeam {

LinkBudgetBreakdown rsp(double x, const BeamDirection& rx_beam,
                        const BeamDirection& tx_beam, const ScenarioConfig& cfg,
                        const PanelConfig& rrh_panel, const PanelConfig& mr_panel) {
  const Distances d = distances(x, cfg);
  const PathLossResult pl = path_loss(d.d2d_m, d.d3d_m, cfg);

  const GcsAngles tx_gcs = arrival_angles_gcs(x, Side::RrhTx, cfg);
  const GcsAngles rx_gcs = arrival_angles_gcs(x, Side::MrRx, cfg);
  const LcsAngles tx_lcs = gcs_to_lcs(tx_gcs, rrh_panel.orientation);
  const LcsAngles rx_lcs = gcs_to_lcs(rx_gcs, mr_panel.orientation);

  LinkBudgetBreakdown b;
  b.p_t_dbm = cfg.tx_power_dbm;
  b.a_e_t_db = element_gain_dbi(tx_lcs, rrh_panel);
  b.a_e_r_db = element_gain_dbi(rx_lcs, mr_panel);
  b.a_b_t_db = array_gain_db(tx_lcs, tx_beam, rrh_panel);
  b.a_b_r_db = array_gain_db(rx_lcs, rx_beam, mr_panel);
  b.pl_db = pl.pl_db;
  b.p_r_dbm = b.p_t_dbm + b.a_e_t_db + b.a_e_r_db + b.a_b_t_db + b.a_b_r_db -
              b.pl_db;
  return b;
}

RspVector rsp_vector(std::span<const BeamDirection> policy,
                     const BeamDirection& tx_beam, const ScenarioConfig& cfg,
                     const PanelConfig& rrh_panel, const PanelConfig& mr_panel) {
  const int n = bin_count(cfg);
  if (policy.size() != static_cast<std::size_t>(n))
    throw ConfigError("policy length " + std::to_string(policy.size()) +
                      " does not match bin count " + std::to_string(n));
  RspVector v;
  v.values_dbm.reserve(n);
  v.positions_m.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const double x = bin_position(i, cfg);
    const LinkBudgetBreakdown b =
        rsp(x, policy[i - 1], tx_beam, cfg, rrh_panel, mr_panel);
    v.values_dbm.push_back(b.p_r_dbm);
    v.positions_m.push_back(x);
    if (b.p_r_dbm > cfg.tx_power_dbm) v.power_violations.push_back(i);
  }
  return v;
}

double objective(const RspVector& v, const ScenarioConfig& cfg) {
  double sum2 = 0.0;
  for (double e : v.values_dbm) sum2 += e * e;
  return (1.0 - cfg.blockage_prob) * std::sqrt(sum2);
}

double mean_rsp_dbm(const RspVector& v) {
  if (v.values_dbm.empty()) return 0.0;
  double s = 0.0;
  for (double e : v.values_dbm) s += e;
  return s / static_cast<double>(v.values_dbm.size());
}

void write_rsp_csv(const std::string& path, const std::string& provenance,
                   std::span<const BeamDirection> policy,
                   const BeamDirection& tx_beam, const ScenarioConfig& cfg,
                   const PanelConfig& rrh_panel, const PanelConfig& mr_panel) {
  auto out = csvio::open_csv(path, provenance);
  out << "bin_index,position_m,theta_b_deg,phi_b_deg,rsp_dbm,p_t_dbm,"
         "a_e_t_db,a_e_r_db,a_b_t_db,a_b_r_db,pl_db\n";
  const int n = bin_count(cfg);
  if (policy.size() != static_cast<std::size_t>(n))
    throw ConfigError("policy length does not match bin count");
  for (int i = 1; i <= n; ++i) {
    const double x = bin_position(i, cfg);
    const LinkBudgetBreakdown b =
        rsp(x, policy[i - 1], tx_beam, cfg, rrh_panel, mr_panel);
    out << i << ',' << csvio::fmt(x) << ',' << csvio::fmt(policy[i - 1].theta_deg)
        << ',' << csvio::fmt(policy[i - 1].phi_deg) << ',' << csvio::fmt(b.p_r_dbm)
        << ',' << csvio::fmt(b.p_t_dbm) << ',' << csvio::fmt(b.a_e_t_db) << ','
        << csvio::fmt(b.a_e_r_db) << ',' << csvio::fmt(b.a_b_t_db) << ','
        << csvio::fmt(b.a_b_r_db) << ',' << csvio::fmt(b.pl_db) << '\n';
  }
}

} // namespace railbeam
