#include "railbeam/channel.hpp"

#include <algorithm>
#include <cmath>

namespace railbeam {

namespace detail {

double pl1_db(double d3d_m, const ScenarioConfig& cfg) {
  const double fc_ghz = cfg.carrier_hz / 1e9;
  const double h = cfg.avg_building_height_m;
  const double h172 = std::pow(h, 1.72);
  return 20.0 * std::log10(40.0 * kPi * d3d_m * fc_ghz / 3.0)
       - std::min(0.044 * h172, 14.77)
       + std::min(0.03 * h172, 10.0) * std::log10(d3d_m)
       + 0.002 * std::log10(h) * d3d_m;
}

double pl2_db(double d3d_m, const ScenarioConfig& cfg) {
  const double d_bp = break_point_distance(cfg);
  // d3D evaluated at the break point of the same scenario geometry, so
  // the two branches agree exactly at d2D = d_BP.
  const double dz = cfg.rrh_height_m - cfg.mr_height_m;
  const double d3d_bp = std::hypot(d_bp, dz);
  return pl1_db(d3d_bp, cfg) + 40.0 * std::log10(d3d_m / d3d_bp);
}

} // namespace detail

double break_point_distance(const ScenarioConfig& cfg) {
  return 2.0 * kPi * cfg.rrh_height_m * cfg.mr_height_m * cfg.carrier_hz /
         kSpeedOfLight;
}

PathLossResult path_loss(double d2d_m, double d3d_m, const ScenarioConfig& cfg) {
  if (d2d_m < 10.0)
    throw DomainError("path loss undefined below 10 m ground distance");
  if (d2d_m > 10000.0)
    throw DomainError("path loss undefined beyond 10 km ground distance");
  PathLossResult r;
  r.d_bp_m = break_point_distance(cfg);
  if (d2d_m <= r.d_bp_m) {
    r.branch = PathLossBranch::PL1;
    r.pl_db = detail::pl1_db(d3d_m, cfg);
  } else {
    r.branch = PathLossBranch::PL2;
    r.pl_db = detail::pl2_db(d3d_m, cfg);
  }
  return r;
}

} // namespace railbeam
