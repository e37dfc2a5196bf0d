#include "railbeam/csv.hpp"

#include <cstdio>

#include "railbeam/common.hpp"

namespace railbeam::csvio {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::ofstream open_csv(const std::string& path, const std::string& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# " << provenance << "\n";
  return out;
}

} // namespace railbeam::csvio
