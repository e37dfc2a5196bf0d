#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace railbeam {

/// Invalid configuration or file contents (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the validity range of a model (e.g. the path-loss
/// distance window).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File read/write failure.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 3.0e8; // m/s

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wrap an angle in degrees into (-180, 180].
inline double wrap_deg(double d) {
  d = std::fmod(d, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

/// Uniform double in [0,1) from the top 53 bits of a 64-bit draw.
/// Used instead of std::uniform_real_distribution so that sampling is
/// fully pinned down by the generator sequence.
template <class Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
template <class Rng>
std::size_t uniform_index(Rng& rng, std::size_t n) {
  const double u = uniform01(rng);
  auto idx = static_cast<std::size_t>(u * static_cast<double>(n));
  return idx >= n ? n - 1 : idx;
}

/// FNV-1a 64-bit hash, used for config provenance stamps.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace railbeam
