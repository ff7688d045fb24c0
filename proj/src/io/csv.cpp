#include "ptlab/io/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ptlab/core/error.hpp"

namespace ptlab::io {

namespace fs = std::filesystem;

std::string provenance_line(std::string_view config_hash) {
    return "# schema_version=" + std::to_string(kSchemaVersion) + " config_hash=" + std::string(config_hash);
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(Errc::parse_error, "not a number: '" + std::string(s) + "'");
    return v;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw Error(Errc::parse_error, "missing column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const { return parse_double(rows.at(row).at(col)); }

namespace {

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = line.find(',', pos);
        out.emplace_back(line.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return out;
}

}  // namespace

CsvTable parse_csv(std::string_view text, std::string_view origin) {
    CsvTable t;
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream in{std::string(line.substr(1))};
            std::string kv;
            while (in >> kv) {
                const auto eq = kv.find('=');
                if (eq != std::string::npos) t.meta[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            continue;
        }
        auto fields = split(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size())
            throw Error(Errc::parse_error, std::string(origin) + ":" + std::to_string(lineno) + ": expected " +
                                               std::to_string(t.header.size()) + " fields, got " +
                                               std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    if (t.header.empty()) throw Error(Errc::parse_error, std::string(origin) + ": no header row");
    return t;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvTable read_csv(const fs::path& path) { return parse_csv(read_text(path), path.string()); }

void write_text(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(Errc::io_error, "cannot move " + tmp.string() + " into place");
    }
}

}  // namespace ptlab::io
