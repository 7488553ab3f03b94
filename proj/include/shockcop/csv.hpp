#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shockcop::io {

/// Shortest representation that parses back to the same double.
std::string format_number(double x);
/// Fixed number of significant digits, trailing zeros trimmed.
std::string format_significant(double x, int digits);

/// Strict: the whole (trimmed) string must be a number. Accepts inf/-inf.
double parse_number(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

struct NumericCsv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;  // '#' lines, without the marker
    std::vector<std::size_t> line_numbers;  // source line of each row
};

/// Reads a CSV with one header line and numeric rows. Blank lines and lines
/// starting with '#' are skipped. Throws ParseError on ragged or
/// non-numeric rows.
NumericCsv read_numeric_csv(std::istream& in);

/// Library version, e.g. "0.1.0".
std::string version();
/// `# shockcop <version> descriptor=<d>[ seed=<s>]` followed by a newline.
std::string header_line(const std::string& descriptor, std::optional<std::uint64_t> seed = std::nullopt);

/// Writes `content` to a sibling temporary and renames it over `path`.
void write_file_atomically(const std::string& path, const std::string& content);

}  // namespace shockcop::io
