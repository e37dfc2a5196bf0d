#include "railbeam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include "railbeam/csv.hpp"

namespace railbeam {

namespace {

int grid_steps(double lo, double hi, double step) {
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

} // namespace

OracleResult grid_search(const ScenarioConfig& cfg, const PanelConfig& rrh_panel,
                         const PanelConfig& mr_panel, const BeamDirection& tx_beam,
                         const SteeringLimits& box, double step_deg,
                         std::uint64_t max_points, unsigned n_threads) {
  cfg.validate();
  box.validate();
  if (step_deg <= 0.0) throw ConfigError("grid step must be > 0");

  const int n = bin_count(cfg);
  const int n_theta = grid_steps(box.theta_min_deg, box.theta_max_deg, step_deg);
  const int n_phi = grid_steps(box.phi_min_deg, box.phi_max_deg, step_deg);
  const std::uint64_t total = static_cast<std::uint64_t>(n) *
                              static_cast<std::uint64_t>(n_theta) *
                              static_cast<std::uint64_t>(n_phi);
  if (total > max_points)
    throw ConfigError("oracle grid needs " + std::to_string(total) +
                      " evaluations, above the configured budget of " +
                      std::to_string(max_points) +
                      "; raise oracle.max_points or coarsen the step");

  OracleResult res;
  res.step_deg = step_deg;
  res.box = box;
  res.position_m.resize(static_cast<std::size_t>(n));
  res.entries.resize(static_cast<std::size_t>(n));
  for (int b = 1; b <= n; ++b)
    res.position_m[static_cast<std::size_t>(b - 1)] = bin_position(b, cfg);

  const auto scan_bin = [&](int b) {
    const double x = res.position_m[static_cast<std::size_t>(b - 1)];
    OracleEntry best;
    best.rsp_dbm = -std::numeric_limits<double>::infinity();
    for (int ti = 0; ti < n_theta; ++ti) {
      const double th = box.theta_min_deg + ti * step_deg;
      for (int pi = 0; pi < n_phi; ++pi) {
        const double ph = box.phi_min_deg + pi * step_deg;
        const double r =
            rsp(x, BeamDirection{th, ph}, tx_beam, cfg, rrh_panel, mr_panel)
                .p_r_dbm;
        if (r > best.rsp_dbm) {
          best.rsp_dbm = r;
          best.best = BeamDirection{th, ph};
        }
      }
    }
    res.entries[static_cast<std::size_t>(b - 1)] = best;
  };

  unsigned hw = n_threads ? n_threads : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  hw = std::min<unsigned>(hw, static_cast<unsigned>(n));
  if (hw <= 1) {
    for (int b = 1; b <= n; ++b) scan_bin(b);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (unsigned t = 0; t < hw; ++t) {
      pool.emplace_back([&, t]() {
        for (int b = 1 + static_cast<int>(t); b <= n; b += static_cast<int>(hw))
          scan_bin(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  return res;
}

void write_oracle_csv(const std::string& path, const std::string& provenance,
                      const OracleResult& r) {
  auto out = csvio::open_csv(path, provenance);
  out << "bin_index,position_m,theta_star_deg,phi_star_deg,rsp_star_dbm\n";
  char buf[160];
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.10g,%.17g\n", i + 1,
                  r.position_m[i], r.entries[i].best.theta_deg,
                  r.entries[i].best.phi_deg, r.entries[i].rsp_dbm);
    out << buf;
  }
}

OracleResult load_oracle_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open oracle file: " + path);
  std::string line;
  OracleResult r;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true; // column header row
      continue;
    }
    std::size_t bin = 0;
    double x = 0, th = 0, ph = 0, rsp_v = 0;
    if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%lf", &bin, &x, &th, &ph,
                    &rsp_v) != 5)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": malformed oracle row");
    r.position_m.push_back(x);
    r.entries.push_back({{th, ph}, rsp_v});
  }
  if (r.entries.empty()) throw ConfigError("oracle file has no rows: " + path);
  return r;
}

} // namespace railbeam
