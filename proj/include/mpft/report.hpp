#pragma once

#include "mpft/sparsity.hpp"
#include "mpft/tracker.hpp"

#include <string>

namespace mpft {

/// report.json text (two-space indent, trailing newline). NaN metrics become
/// null. Byte-identical for identical reports.
std::string report_json(const RunReport& report);

/// One compact JSON line for a sparse region.
std::string region_json_line(const SparseRegion& region);

/// Standalone SVG scatter of an archive. Points are coloured by provenance and
/// regions shaded. Three-objective fronts become three coordinate-pair panels.
std::string front_svg(const ParetoArchive& archive, const std::vector<SparseRegion>& regions);

}  // namespace mpft
