#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ptlab::io {

inline constexpr int kSchemaVersion = 1;

/// "# schema_version=1 config_hash=<hash>"
std::string provenance_line(std::string_view config_hash);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

/// Comma-separated table. Lines starting with '#' are comments; key=value
/// pairs found in them land in meta.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> meta;

    /// Throws parse_error for a missing column.
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::size_t col) const;
};

CsvTable parse_csv(std::string_view text, std::string_view origin = "<memory>");
CsvTable read_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

/// Writes via a temporary file in the same directory and renames it into
/// place, so readers never see partial content.
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace ptlab::io
