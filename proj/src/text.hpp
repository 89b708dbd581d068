#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace semnorm {

// Locale-independent number formatting for reports.
std::string format_general(double value, int significant_digits);
std::string format_fixed(double value, int decimals);

/// Tabs and line breaks become spaces so a value stays one TSV cell.
std::string tsv_field(std::string_view s);

/// At most `width` code points, with "..." appended when cut. 0 = no limit.
std::string truncate_utf8(std::string_view s, std::size_t width);

} // namespace semnorm
