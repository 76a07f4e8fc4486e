#pragma once

#include <string>
#include <vector>

namespace regfrac {

// Decimal formatting with 17 significant digits (round-trips doubles).
std::string format_double(double v);

// Writes content to path atomically: temp file in the same directory, then
// rename.
void atomic_write(const std::string& path, const std::string& content);

// CSV with a header row, '\n' line endings, 17-significant-digit decimals.
std::string make_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

}  // namespace regfrac
