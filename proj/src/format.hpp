#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace mpft::detail {

/// 17 significant digits; parses back to the identical double.
std::string format_real(double v);

/// Whole-string parse; nullopt on trailing garbage or empty input.
std::optional<double> parse_real(std::string_view s);

}  // namespace mpft::detail
