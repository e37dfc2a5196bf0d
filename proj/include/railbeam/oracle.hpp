#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "railbeam/link.hpp"

// Independent brute-force ground truth: per-bin exhaustive grid search
// over receive-beam directions for the maximum achievable RSP.
namespace railbeam {

struct OracleEntry {
  BeamDirection best;
  double rsp_dbm = 0.0;
};

struct OracleResult {
  double step_deg = 0.0;
  SteeringLimits box;
  std::vector<double> position_m;
  std::vector<OracleEntry> entries;
};

/// Evaluates the full link budget on a step_deg grid over the steering
/// box at every bin; ties resolve to the first grid point scanned
/// (theta outer, phi inner, both ascending). Refuses grids whose total
/// point count exceeds max_points, naming the required budget.
/// Bins are processed in parallel and merged in index order.
OracleResult grid_search(const ScenarioConfig& cfg, const PanelConfig& rrh_panel,
                         const PanelConfig& mr_panel, const BeamDirection& tx_beam,
                         const SteeringLimits& box, double step_deg,
                         std::uint64_t max_points, unsigned n_threads = 0);

void write_oracle_csv(const std::string& path, const std::string& provenance,
                      const OracleResult& r);

OracleResult load_oracle_csv(const std::string& path);

} // namespace railbeam
