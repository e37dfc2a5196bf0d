#pragma once

#include "railbeam/geometry.hpp"

// Element radiation pattern and composite array radiation gain of an
// N_H x N_V planar panel.
namespace railbeam {

/// A receiver/transmitter steering pair in degrees, interpreted in the
/// panel's local frame.
struct BeamDirection {
  double theta_deg = 0.0; // down-tilting angle
  double phi_deg = 0.0;   // azimuth angle
};

/// Box the steered beam is clamped to when relative actions are applied.
struct SteeringLimits {
  double theta_min_deg = -90.0;
  double theta_max_deg = 90.0;
  double phi_min_deg = -180.0;
  double phi_max_deg = 180.0;

  BeamDirection clamp(BeamDirection b) const;
  void validate() const;
};

struct PanelConfig {
  int n_h = 4; // elements per row
  int n_v = 2; // elements per column
  double d_v_over_lambda = 0.5;
  double d_h_over_lambda = 0.5;
  double theta_3db_deg = 65.0;
  double phi_3db_deg = 65.0;
  double sla_v_db = 30.0;
  double a_max_db = 30.0;
  double element_gain_max_dbi = 8.0;
  PanelOrientation orientation;

  void validate() const;
};

/// RRH-side panel parameters (orientation left at identity; callers fill
/// it from the scenario).
PanelConfig default_rrh_panel();

/// MR-side panel parameters.
PanelConfig default_mr_panel();

/// Reported instead of -inf when the composite phasor magnitude
/// underflows (|sum|^2 < 1e-12); keeps rewards finite.
inline constexpr double kArrayGainFloorDb = -120.0;

/// Combined vertical/horizontal cut attenuation in dB (<= 0).
double element_attenuation_db(const LcsAngles& lcs, const PanelConfig& p);

/// element_gain_max_dbi + element_attenuation; never exceeds the maximum
/// directional gain.
double element_gain_dbi(const LcsAngles& lcs, const PanelConfig& p);

/// Composite array radiation gain for an arrival direction (panel-local)
/// and a steered beam. Bounded above by 10*log10(n_h*n_v).
double array_gain_db(const LcsAngles& arrival, const BeamDirection& beam,
                     const PanelConfig& p);

} // namespace railbeam
