#pragma once

#include "railbeam/common.hpp"

// Rail/RRH layout, location-bin indexing, distances, and
// departure/arrival angles in global and panel-local coordinates.
//
// Global frame: x along the rail in the direction of travel, y toward
// the RRH side of the track, z up. Zenith angles are measured from +z,
// azimuth from +x toward +y. All public angles are degrees.
namespace railbeam {

struct ScenarioConfig {
  double rail_length_m = 2000.0;
  double bin_radius_m = 2.5;          // sigma_D; a bin spans 2*sigma_D
  double rrh_offset_m = 700.0;        // RRH position along the rail
  double d_min_m = 150.0;             // lateral RRH-to-rail distance
  double d_s_m = 700.0;               // spacing between adjacent RRHs
  double rrh_height_m = 15.0;
  double mr_height_m = 5.0;
  double carrier_hz = 30e9;
  double tx_power_dbm = 31.0;
  double avg_building_height_m = 5.0; // h, valid in [5,50] m
  double blockage_prob = 0.0;         // P_b, constant per segment

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Number of location bins, N = L/(2*sigma_D) + 1.
/// Rejects rail lengths that are not an integer multiple of the bin span.
int bin_count(const ScenarioConfig& cfg);

/// Center of bin n (1-based), x = (n-1) * 2*sigma_D.
double bin_position(int n, const ScenarioConfig& cfg);

struct Distances {
  double d2d_m = 0.0;
  double d3d_m = 0.0;
};

/// Ground and slant distance between the MR at rail position x and the RRH.
Distances distances(double x, const ScenarioConfig& cfg);

struct GcsAngles {
  double theta_deg = 0.0; // zenith, [0,180]
  double phi_deg = 0.0;   // azimuth, (-180,180]
};

struct LcsAngles {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
};

/// Panel mounting: bearing is the boresight azimuth in the global frame,
/// positive downtilt lowers the boresight below the horizon.
struct PanelOrientation {
  double bearing_deg = 0.0;
  double downtilt_deg = 0.0;
};

enum class Side { RrhTx, MrRx };

/// Direction of the link as seen from one end: MR->RRH for the MR side,
/// RRH->MR for the RRH side, expressed in the global frame.
GcsAngles arrival_angles_gcs(double x, Side side, const ScenarioConfig& cfg);

/// Rotate a global direction into the panel frame: first by -bearing
/// about the vertical axis, then by -downtilt about the panel's
/// horizontal axis. Boresight maps to (theta'=90, phi'=0).
LcsAngles gcs_to_lcs(const GcsAngles& a, const PanelOrientation& o);

/// Inverse of gcs_to_lcs.
GcsAngles lcs_to_gcs(const LcsAngles& a, const PanelOrientation& o);

/// RRH panel aimed at the rail one RRH spacing back along the track,
/// at MR height.
PanelOrientation default_rrh_orientation(const ScenarioConfig& cfg);

/// MR panel boresight reciprocal to the RRH panel's.
PanelOrientation default_mr_orientation(const ScenarioConfig& cfg);

} // namespace railbeam
