#pragma once

#include "railbeam/geometry.hpp"

// Large-scale LOS path loss with a break-point distance. Valid for
// ground distances between 10 m and 10 km; the carrier enters the
// leading term normalized by 1 GHz.
namespace railbeam {

enum class PathLossBranch { PL1, PL2 };

struct PathLossResult {
  double pl_db = 0.0;
  PathLossBranch branch = PathLossBranch::PL1;
  double d_bp_m = 0.0;
};

/// d_BP = 2*pi * h_R * h_T * f_c / c.
double break_point_distance(const ScenarioConfig& cfg);

/// Throws DomainError outside the 10 m .. 10 km ground-distance window.
PathLossResult path_loss(double d2d_m, double d3d_m, const ScenarioConfig& cfg);

namespace detail {
// Branch formulas exposed for the continuity check at d_BP.
double pl1_db(double d3d_m, const ScenarioConfig& cfg);
double pl2_db(double d3d_m, const ScenarioConfig& cfg);
} // namespace detail

} // namespace railbeam
