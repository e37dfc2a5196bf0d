#include "railbeam/antenna.hpp"

#include <algorithm>
#include <cmath>

namespace railbeam {

BeamDirection SteeringLimits::clamp(BeamDirection b) const {
  b.theta_deg = std::clamp(b.theta_deg, theta_min_deg, theta_max_deg);
  b.phi_deg = std::clamp(b.phi_deg, phi_min_deg, phi_max_deg);
  return b;
}

void SteeringLimits::validate() const {
  if (theta_min_deg > theta_max_deg || phi_min_deg > phi_max_deg)
    throw ConfigError("steering limits: min must not exceed max");
}

void PanelConfig::validate() const {
  if (n_h < 1 || n_v < 1) throw ConfigError("panel needs n_h >= 1 and n_v >= 1");
  if (theta_3db_deg <= 0.0 || phi_3db_deg <= 0.0)
    throw ConfigError("3 dB beamwidths must be > 0");
  if (sla_v_db < 0.0 || a_max_db < 0.0 || element_gain_max_dbi < 0.0)
    throw ConfigError("attenuation caps and max gain must be >= 0");
  if (d_v_over_lambda <= 0.0 || d_h_over_lambda <= 0.0)
    throw ConfigError("element spacings must be > 0");
}

PanelConfig default_rrh_panel() {
  PanelConfig p;
  p.theta_3db_deg = 65.0;
  p.phi_3db_deg = 65.0;
  p.sla_v_db = 30.0;
  p.a_max_db = 30.0;
  p.element_gain_max_dbi = 8.0;
  return p;
}

PanelConfig default_mr_panel() {
  PanelConfig p;
  p.theta_3db_deg = 90.0;
  p.phi_3db_deg = 90.0;
  p.sla_v_db = 25.0;
  p.a_max_db = 25.0;
  p.element_gain_max_dbi = 5.0;
  return p;
}

double element_attenuation_db(const LcsAngles& lcs, const PanelConfig& p) {
  const double dv = (lcs.theta_deg - 90.0) / p.theta_3db_deg;
  const double dh = lcs.phi_deg / p.phi_3db_deg;
  const double a_v = -std::min(12.0 * dv * dv, p.sla_v_db);
  const double a_h = -std::min(12.0 * dh * dh, p.a_max_db);
  return -std::min(-(a_v + a_h), p.a_max_db);
}

double element_gain_dbi(const LcsAngles& lcs, const PanelConfig& p) {
  return p.element_gain_max_dbi + element_attenuation_db(lcs, p);
}

double array_gain_db(const LcsAngles& arrival, const BeamDirection& beam,
                     const PanelConfig& p) {
  const double cos_te = std::cos(deg2rad(arrival.theta_deg));
  const double sin_te_sin_pe =
      std::sin(deg2rad(arrival.theta_deg)) * std::sin(deg2rad(arrival.phi_deg));
  const double sin_tb = std::sin(deg2rad(beam.theta_deg));
  const double cos_tb_sin_pb =
      std::cos(deg2rad(beam.theta_deg)) * std::sin(deg2rad(beam.phi_deg));

  // Per-element phase of w_{n,m} * v_{n,m}: the vertical index advances
  // by dV*(cos(theta_E) + sin(theta_B)), the horizontal index by
  // dH*(sin(theta_E)sin(phi_E) - cos(theta_B)sin(phi_B)), both in turns.
  const double step_v = 2.0 * kPi * p.d_v_over_lambda * (cos_te + sin_tb);
  const double step_h =
      2.0 * kPi * p.d_h_over_lambda * (sin_te_sin_pe - cos_tb_sin_pb);

  double re = 0.0, im = 0.0;
  for (int m = 0; m < p.n_h; ++m) {
    for (int n = 0; n < p.n_v; ++n) {
      const double phase = n * step_v + m * step_h;
      re += std::cos(phase);
      im += std::sin(phase);
    }
  }
  const double count = static_cast<double>(p.n_h) * static_cast<double>(p.n_v);
  const double mag2 = (re * re + im * im) / count; // 1/sqrt(N_H N_V) weighting
  if (mag2 < 1e-12) return kArrayGainFloorDb;
  return 10.0 * std::log10(mag2);
}

} // namespace railbeam
