#pragma once

#include <fstream>
#include <string>

namespace railbeam::csvio {

/// Fixed CSV number format: '.' decimal separator, up to 10 significant
/// digits, no locale dependence.
std::string fmt(double v);

/// Opens a CSV for writing and emits the provenance comment line
/// ("# <provenance>"). Throws IoError on failure.
std::ofstream open_csv(const std::string& path, const std::string& provenance);

} // namespace railbeam::csvio
