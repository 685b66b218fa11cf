#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace topots::text {

/// Splits one CSV record. Double-quoted fields may contain the delimiter and
/// escaped quotes (""). Surrounding whitespace of unquoted fields is trimmed.
std::vector<std::string> split_csv_line(std::string_view line, char delimiter = ',');

std::string trim(std::string_view s);

/// Strict full-string parse; rejects trailing garbage, empty input and non-finite values.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary file in the same directory, then renames.
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string join(const std::vector<std::string>& parts, std::string_view separator);

}  // namespace topots::text
