#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vitalclust::textio {

/// Shortest representation that round-trips the exact double value.
std::string fmt_double(double v);

/// Fixed-precision formatting (SVG coordinates and similar).
std::string fmt_double_fixed(double v, int precision);

std::string fmt_u64_hex(std::uint64_t v);

/// Strict, locale-independent numeric parsing; the whole field must match.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Splits one CSV line. Plain fields split on commas; double-quoted fields
/// may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a field when it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

struct CsvRow {
  int line = 0;  // 1-based, header is line 1
  std::vector<std::string> fields;
};

struct CsvFile {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

/// Reads a whole CSV file. Throws std::runtime_error when the file is
/// missing or has no header line. Blank lines are skipped.
CsvFile read_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace vitalclust::textio
