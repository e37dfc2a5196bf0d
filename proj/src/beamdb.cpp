#include "railbeam/beamdb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "railbeam/csv.hpp"

namespace railbeam {

namespace {

bool rsp_desc(const BeamDbEntry& a, const BeamDbEntry& b) {
  return a.rsp_dbm > b.rsp_dbm;
}

} // namespace

BeamDatabase::BeamDatabase(int n_bins, int d_c, std::string tag)
    : n_bins_(n_bins), d_c_(d_c), tag_(std::move(tag)) {
  if (n_bins < 1) throw ConfigError("database needs at least one bin");
  if (d_c < 1) throw ConfigError("database needs D_C >= 1");
  rows_.resize(static_cast<std::size_t>(n_bins));
}

std::span<const BeamDbEntry> BeamDatabase::bin(int bin) const {
  if (bin < 1 || bin > n_bins_) throw DomainError("database bin out of range");
  return rows_[static_cast<std::size_t>(bin - 1)];
}

void BeamDatabase::set_bin(int bin, std::vector<BeamDbEntry> entries) {
  if (bin < 1 || bin > n_bins_) throw DomainError("database bin out of range");
  if (entries.size() != static_cast<std::size_t>(d_c_))
    throw ConfigError("database bin must hold exactly D_C entries");
  std::stable_sort(entries.begin(), entries.end(), rsp_desc);
  rows_[static_cast<std::size_t>(bin - 1)] = std::move(entries);
}

void BeamDatabase::overwrite(int bin, int rank, double rsp_dbm) {
  if (bin < 1 || bin > n_bins_) throw DomainError("database bin out of range");
  auto& row = rows_[static_cast<std::size_t>(bin - 1)];
  if (rank < 0 || rank >= static_cast<int>(row.size()))
    throw DomainError("database rank out of range");
  row[static_cast<std::size_t>(rank)].rsp_dbm = rsp_dbm;
  std::stable_sort(row.begin(), row.end(), rsp_desc);
}

bool BeamDatabase::sorted() const {
  for (const auto& row : rows_)
    if (!std::is_sorted(row.begin(), row.end(),
                        [](const BeamDbEntry& a, const BeamDbEntry& b) {
                          return a.rsp_dbm > b.rsp_dbm;
                        }))
      return false;
  return true;
}

void BeamDatabase::save(const std::string& path,
                        const std::string& provenance) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# RBDB0001 " << provenance << "\n";
  out << "# tag=" << tag_ << " n_bins=" << n_bins_ << " d_c=" << d_c_ << "\n";
  out << "bin,rank,theta_b_deg,phi_b_deg,rsp_dbm\n";
  char buf[128];
  for (int b = 1; b <= n_bins_; ++b) {
    const auto& row = rows_[static_cast<std::size_t>(b - 1)];
    for (std::size_t r = 0; r < row.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g,%.17g\n", b, r + 1,
                    row[r].dir.theta_deg, row[r].dir.phi_deg, row[r].rsp_dbm);
      out << buf;
    }
  }
  if (!out) throw IoError("short write: " + path);
}

BeamDatabase BeamDatabase::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open database file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# RBDB0001", 0) != 0)
    throw ConfigError("database file header/version mismatch: " + path);
  if (!std::getline(in, line))
    throw ConfigError("database file missing metadata line: " + path);
  std::string tag;
  int n_bins = 0, d_c = 0;
  {
    const auto tag_pos = line.find("tag=");
    const auto nb_pos = line.find("n_bins=");
    const auto dc_pos = line.find("d_c=");
    if (tag_pos == std::string::npos || nb_pos == std::string::npos ||
        dc_pos == std::string::npos)
      throw ConfigError("database metadata line malformed: " + path);
    tag = line.substr(tag_pos + 4, line.find(' ', tag_pos + 4) - tag_pos - 4);
    n_bins = std::atoi(line.c_str() + nb_pos + 7);
    d_c = std::atoi(line.c_str() + dc_pos + 4);
  }
  if (!std::getline(in, line)) throw ConfigError("database file truncated: " + path);

  BeamDatabase db(n_bins, d_c, tag);
  std::vector<std::vector<BeamDbEntry>> rows(static_cast<std::size_t>(n_bins));
  int lineno = 3;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    int b = 0, r = 0;
    double th = 0, ph = 0, rsp = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf", &b, &r, &th, &ph, &rsp) != 5)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": malformed database row");
    if (b < 1 || b > n_bins || r < 1 || r > d_c)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": bin/rank out of range");
    rows[static_cast<std::size_t>(b - 1)].push_back({{th, ph}, rsp});
  }
  for (int b = 1; b <= n_bins; ++b) {
    if (rows[static_cast<std::size_t>(b - 1)].size() !=
        static_cast<std::size_t>(d_c))
      throw ConfigError(path + ": bin " + std::to_string(b) +
                        " does not hold D_C entries");
    db.set_bin(b, std::move(rows[static_cast<std::size_t>(b - 1)]));
  }
  return db;
}

namespace {

// Shared harvesting walk: rank actions by Q at each bin, materialize the
// top D_C into beams, measure, and advance greedily.
template <class QValuesFn, class MaterializeFn, class AdvanceFn>
BeamDatabase build_database_impl(const BeamEnv& env, int d_c, int n_actions,
                                 const std::string& tag, QValuesFn q_values,
                                 MaterializeFn materialize, AdvanceFn advance) {
  if (d_c < 1) throw ConfigError("D_C must be >= 1");
  if (d_c > n_actions)
    throw ConfigError("D_C cannot exceed the number of candidate actions");
  BeamDatabase db(env.n_bins(), d_c, tag);
  EnvState s = env.reset();
  std::vector<int> order(static_cast<std::size_t>(n_actions));
  for (int bin = 1; bin <= env.n_bins(); ++bin) {
    const std::vector<double> q = q_values(bin);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return q[a] > q[b]; });
    std::vector<BeamDbEntry> entries;
    entries.reserve(static_cast<std::size_t>(d_c));
    for (int r = 0; r < d_c; ++r) {
      const BeamDirection dir = materialize(s, order[static_cast<std::size_t>(r)]);
      entries.push_back({dir, env.measure(bin, dir).p_r_dbm});
    }
    db.set_bin(bin, std::move(entries));
    s = advance(s, order[0]).next;
  }
  return db;
}

} // namespace

BeamDatabase build_database_dqn(const QNetworkParams& p, const BeamEnv& env,
                                int d_c) {
  TdWorkspace ws;
  const double inv_l = 1.0 / env.scenario().rail_length_m;
  return build_database_impl(
      env, d_c, 9, "dqn",
      [&](int bin) {
        const double in[1] = {env.position(bin) * inv_l};
        return forward(p, in);
      },
      [&](const EnvState& s, int a) {
        const Action& act = env.actions()[static_cast<std::size_t>(a)];
        return env.limits().clamp(BeamDirection{s.beam.theta_deg + act.dtheta_deg,
                                                s.beam.phi_deg + act.dphi_deg});
      },
      [&](const EnvState& s, int a) {
        return env.step(s, env.actions()[static_cast<std::size_t>(a)]);
      });
}

BeamDatabase build_database_codebook16(const QNetworkParams& p,
                                       const BeamEnv& env, int d_c) {
  static const std::array<BeamDirection, 16> book = codebook16();
  const double inv_l = 1.0 / env.scenario().rail_length_m;
  return build_database_impl(
      env, d_c, 16, "dqn16",
      [&](int bin) {
        const double in[1] = {env.position(bin) * inv_l};
        return forward(p, in);
      },
      [&](const EnvState&, int a) { return book[static_cast<std::size_t>(a)]; },
      [&](const EnvState& s, int a) {
        return env.step_to_beam(s, book[static_cast<std::size_t>(a)]);
      });
}

BeamDatabase build_database_qtable(const QTable& t, const BeamEnv& env, int d_c) {
  return build_database_impl(
      env, d_c, t.n_actions(), "qlearning",
      [&](int bin) {
        std::vector<double> q(static_cast<std::size_t>(t.n_actions()));
        for (int a = 0; a < t.n_actions(); ++a) q[static_cast<std::size_t>(a)] = t.at(bin - 1, a);
        return q;
      },
      [&](const EnvState& s, int a) {
        const Action& act = env.actions()[static_cast<std::size_t>(a)];
        return env.limits().clamp(BeamDirection{s.beam.theta_deg + act.dtheta_deg,
                                                s.beam.phi_deg + act.dphi_deg});
      },
      [&](const EnvState& s, int a) {
        return env.step(s, env.actions()[static_cast<std::size_t>(a)]);
      });
}

CycleStats run_test_cycles(BeamDatabase& db, const BeamEnv& env, int cycles,
                           double p1, std::uint64_t seed) {
  if (cycles < 1) throw ConfigError("cycle count must be >= 1");
  if (p1 < 0.0 || p1 > 1.0) throw ConfigError("utilization probability must lie in [0,1]");
  if (db.d_c() == 1 && p1 < 1.0)
    throw ConfigError("D_C=1 leaves no exploration targets for P1 < 1");
  if (db.n_bins() != env.n_bins())
    throw ConfigError("database bin count does not match the scenario");

  const int n = env.n_bins();
  std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sum2(static_cast<std::size_t>(n), 0.0);
  std::mt19937_64 rng(seed);

  for (int c = 0; c < cycles; ++c) {
    for (int bin = 1; bin <= n; ++bin) {
      int rank = 0;
      if (uniform01(rng) >= p1)
        rank = 1 + static_cast<int>(uniform_index(
                       rng, static_cast<std::size_t>(db.d_c() - 1)));
      const BeamDirection dir = db.bin(bin)[static_cast<std::size_t>(rank)].dir;
      const double measured = env.measure(bin, dir).p_r_dbm;
      const double reward = measured - env.benchmark_rsp_dbm(bin);
      sum[static_cast<std::size_t>(bin - 1)] += reward;
      sum2[static_cast<std::size_t>(bin - 1)] += reward * reward;
      db.overwrite(bin, rank, measured);
    }
  }

  CycleStats st;
  st.cycles = cycles;
  const double m = static_cast<double>(cycles);
  for (int bin = 1; bin <= n; ++bin) {
    const std::size_t i = static_cast<std::size_t>(bin - 1);
    const double mean = sum[i] / m;
    double var = 0.0;
    if (cycles > 1) var = std::max(0.0, (sum2[i] - m * mean * mean) / (m - 1.0));
    const double sd = std::sqrt(var);
    const double half = 1.96 * sd / std::sqrt(m);
    st.position_m.push_back(env.position(bin));
    st.mean_db.push_back(mean);
    st.std_db.push_back(sd);
    st.ci_low_db.push_back(mean - half);
    st.ci_high_db.push_back(mean + half);
  }
  return st;
}

void write_cycle_stats_csv(const std::string& path, const std::string& provenance,
                           const CycleStats& stats) {
  auto out = csvio::open_csv(path, provenance);
  out << "bin_index,position_m,mean_db,std_db,ci_low_db,ci_high_db\n";
  for (std::size_t i = 0; i < stats.mean_db.size(); ++i) {
    out << (i + 1) << ',' << csvio::fmt(stats.position_m[i]) << ','
        << csvio::fmt(stats.mean_db[i]) << ',' << csvio::fmt(stats.std_db[i])
        << ',' << csvio::fmt(stats.ci_low_db[i]) << ','
        << csvio::fmt(stats.ci_high_db[i]) << '\n';
  }
}

} // namespace railbeam
