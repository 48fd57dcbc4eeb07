// io.hpp — CSV tables with '#' metadata, JSON helpers and SHA-256 checksums

#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace dissfield::io {

using Json = nlohmann::ordered_json;

struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// 17 significant digits; non-finite values as nan / inf / -inf.
std::string format_number(double x);

std::string format_csv(const Table& t);
// Throws Error{InvalidInput} on a malformed file.
Table parse_csv(std::istream& in);
Table read_csv(const std::filesystem::path& path);

// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}
Json table_to_json(const Table& t);

// Non-finite values become null.
Json number(double x);

std::string dump(const Json& j);

void write_text(const std::filesystem::path& path, const std::string& text);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

} // namespace dissfield::io
