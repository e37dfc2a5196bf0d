#include "railbeam/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace railbeam {

namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 unit_from_angles(double theta_rad, double phi_rad) {
  const double st = std::sin(theta_rad);
  return {st * std::cos(phi_rad), st * std::sin(phi_rad), std::cos(theta_rad)};
}

Vec3 rot_z(const Vec3& v, double a_rad) {
  const double c = std::cos(a_rad), s = std::sin(a_rad);
  return {v.x * c - v.y * s, v.x * s + v.y * c, v.z};
}

Vec3 rot_y(const Vec3& v, double a_rad) {
  const double c = std::cos(a_rad), s = std::sin(a_rad);
  return {v.x * c + v.z * s, v.y, -v.x * s + v.z * c};
}

double clamp1(double v) { return std::clamp(v, -1.0, 1.0); }

GcsAngles angles_from_vec(const Vec3& v, double norm) {
  GcsAngles a;
  a.theta_deg = rad2deg(std::acos(clamp1(v.z / norm)));
  a.phi_deg = wrap_deg(rad2deg(std::atan2(v.y, v.x)));
  return a;
}

} // namespace

void ScenarioConfig::validate() const {
  if (rail_length_m <= 0.0) throw ConfigError("rail_length_m must be > 0");
  if (bin_radius_m <= 0.0) throw ConfigError("bin_radius_m must be > 0");
  const double ratio = rail_length_m / (2.0 * bin_radius_m);
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("rail_length_m must be an integer multiple of 2*bin_radius_m");
  if (avg_building_height_m < 5.0 || avg_building_height_m > 50.0)
    throw ConfigError("avg_building_height_m must lie in [5,50] m");
  if (mr_height_m <= 0.0 || rrh_height_m <= mr_height_m)
    throw ConfigError("heights must satisfy rrh_height_m > mr_height_m > 0");
  if (carrier_hz <= 0.0) throw ConfigError("carrier_hz must be > 0");
  if (blockage_prob < 0.0 || blockage_prob > 1.0)
    throw ConfigError("blockage_prob must lie in [0,1]");
  if (d_min_m < 0.0) throw ConfigError("d_min_m must be >= 0");
  if (rrh_offset_m < 0.0 || rrh_offset_m > rail_length_m)
    throw ConfigError("rrh_offset_m must lie on the rail");
}

int bin_count(const ScenarioConfig& cfg) {
  const double ratio = cfg.rail_length_m / (2.0 * cfg.bin_radius_m);
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("rail_length_m / (2*bin_radius_m) is not an integer");
  return static_cast<int>(rounded) + 1;
}

double bin_position(int n, const ScenarioConfig& cfg) {
  const int count = bin_count(cfg);
  if (n < 1 || n > count)
    throw DomainError("bin index " + std::to_string(n) + " outside [1," +
                      std::to_string(count) + "]");
  return (n - 1) * 2.0 * cfg.bin_radius_m;
}

Distances distances(double x, const ScenarioConfig& cfg) {
  Distances d;
  d.d2d_m = std::hypot(x - cfg.rrh_offset_m, cfg.d_min_m);
  d.d3d_m = std::hypot(d.d2d_m, cfg.rrh_height_m - cfg.mr_height_m);
  return d;
}

GcsAngles arrival_angles_gcs(double x, Side side, const ScenarioConfig& cfg) {
  Vec3 v{};
  if (side == Side::MrRx) {
    v = {cfg.rrh_offset_m - x, cfg.d_min_m, cfg.rrh_height_m - cfg.mr_height_m};
  } else {
    v = {x - cfg.rrh_offset_m, -cfg.d_min_m, cfg.mr_height_m - cfg.rrh_height_m};
  }
  const double norm = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  return angles_from_vec(v, norm);
}

LcsAngles gcs_to_lcs(const GcsAngles& a, const PanelOrientation& o) {
  Vec3 u = unit_from_angles(deg2rad(a.theta_deg), deg2rad(a.phi_deg));
  u = rot_z(u, -deg2rad(o.bearing_deg));
  u = rot_y(u, -deg2rad(o.downtilt_deg));
  LcsAngles out;
  out.theta_deg = rad2deg(std::acos(clamp1(u.z)));
  out.phi_deg = wrap_deg(rad2deg(std::atan2(u.y, u.x)));
  return out;
}

GcsAngles lcs_to_gcs(const LcsAngles& a, const PanelOrientation& o) {
  Vec3 u = unit_from_angles(deg2rad(a.theta_deg), deg2rad(a.phi_deg));
  u = rot_y(u, deg2rad(o.downtilt_deg));
  u = rot_z(u, deg2rad(o.bearing_deg));
  GcsAngles out;
  out.theta_deg = rad2deg(std::acos(clamp1(u.z)));
  out.phi_deg = wrap_deg(rad2deg(std::atan2(u.y, u.x)));
  return out;
}

PanelOrientation default_rrh_orientation(const ScenarioConfig& cfg) {
  // Aim point: the rail at one RRH spacing back down the track, MR height.
  const double dx = -cfg.d_s_m;
  const double dy = -cfg.d_min_m;
  const double dz = cfg.mr_height_m - cfg.rrh_height_m;
  PanelOrientation o;
  o.bearing_deg = wrap_deg(rad2deg(std::atan2(dy, dx)));
  o.downtilt_deg = rad2deg(std::atan2(-dz, std::hypot(dx, dy)));
  return o;
}

PanelOrientation default_mr_orientation(const ScenarioConfig& cfg) {
  const PanelOrientation rrh = default_rrh_orientation(cfg);
  PanelOrientation o;
  o.bearing_deg = wrap_deg(rrh.bearing_deg + 180.0);
  o.downtilt_deg = -rrh.downtilt_deg;
  return o;
}

} // namespace railbeam
