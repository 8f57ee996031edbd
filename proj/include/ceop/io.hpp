#pragma once

#include <string>
#include <vector>

namespace ceop {

/// Round-trip-safe decimal rendering (%.17g), used for every CSV number so
/// that output bytes depend only on the values.
std::string format_double(double v);

/**
 * @brief Reads a numeric series: one value per line, or one CSV column when
 *        csv_column >= 0.
 *
 * A non-numeric first data line is treated as a header and skipped. Any later
 * malformed or non-finite value raises std::runtime_error naming the line
 * number. Missing or unreadable files raise std::runtime_error.
 */
std::vector<double> read_series_file(const std::string& path, int csv_column = -1);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ceop
