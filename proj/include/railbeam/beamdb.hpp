#pragma once

#include <span>
#include <string>
#include <vector>

#include "railbeam/agents.hpp"

// Post-learning database of ranked candidate beams per bin, the
// utilization/exploration test protocol, and multi-cycle statistics.
namespace railbeam {

struct BeamDbEntry {
  BeamDirection dir;
  double rsp_dbm = 0.0;
};

/// Per bin, D_C (direction, recorded RSP) pairs kept sorted best-first
/// by recorded RSP after every update.
class BeamDatabase {
public:
  BeamDatabase(int n_bins, int d_c, std::string tag = {});

  int n_bins() const { return n_bins_; }
  int d_c() const { return d_c_; }
  const std::string& tag() const { return tag_; }

  std::span<const BeamDbEntry> bin(int bin) const;

  /// Replaces a bin's entries (must be exactly D_C of them) and sorts.
  void set_bin(int bin, std::vector<BeamDbEntry> entries);

  /// Overwrites the recorded RSP of one entry, then restores sortedness.
  void overwrite(int bin, int rank, double rsp_dbm);

  bool sorted() const;

  void save(const std::string& path, const std::string& provenance) const;
  static BeamDatabase load(const std::string& path);

private:
  int n_bins_;
  int d_c_;
  std::string tag_;
  std::vector<std::vector<BeamDbEntry>> rows_;
};

/// For each bin, the D_C top actions by the agent's Q-values along a
/// greedy rollout, materialized into beam directions and recorded with
/// their measured RSP.
BeamDatabase build_database_dqn(const QNetworkParams& p, const BeamEnv& env,
                                int d_c);
BeamDatabase build_database_codebook16(const QNetworkParams& p,
                                       const BeamEnv& env, int d_c);
BeamDatabase build_database_qtable(const QTable& t, const BeamEnv& env, int d_c);

struct CycleStats {
  int cycles = 0;
  std::vector<double> position_m;
  std::vector<double> mean_db;
  std::vector<double> std_db;     // sample standard deviation
  std::vector<double> ci_low_db;  // mean -/+ 1.96 * std / sqrt(M)
  std::vector<double> ci_high_db;
};

/// Runs M cycles over the rail: per bin use the best entry with
/// probability p1, otherwise one of the other D_C-1 uniformly; the
/// measured RSP overwrites the used entry. Rewards against the
/// benchmark are aggregated per bin.
CycleStats run_test_cycles(BeamDatabase& db, const BeamEnv& env, int cycles,
                           double p1, std::uint64_t seed);

void write_cycle_stats_csv(const std::string& path, const std::string& provenance,
                           const CycleStats& stats);

} // namespace railbeam
