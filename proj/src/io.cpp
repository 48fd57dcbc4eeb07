// io.cpp — table serialization and checksums

#include "dissfield/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dissfield/error.hpp"

namespace dissfield::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
    if (cell == "nan") return std::nan("");
    if (cell == "inf") return HUGE_VAL;
    if (cell == "-inf") return -HUGE_VAL;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size())
        throw Error(ErrorKind::InvalidInput, "CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
    return v;
}

} // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_csv(const Table& t) {
    std::string out;
    for (const auto& [k, v] : t.metadata) out += "# " + k + ": " + v + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
        out += "\n";
    }
    return out;
}

Table parse_csv(std::istream& in) {
    Table t;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = trim(line.substr(1));
            const auto colon = body.find(": ");
            if (colon == std::string::npos)
                t.metadata.emplace_back(body, "");
            else
                t.metadata.emplace_back(body.substr(0, colon), body.substr(colon + 2));
            continue;
        }
        const auto cells = split(line);
        if (!have_header) {
            t.columns = cells;
            have_header = true;
            continue;
        }
        if (cells.size() != t.columns.size())
            throw Error(ErrorKind::InvalidInput, "CSV line " + std::to_string(line_no) + ": expected " +
                                                     std::to_string(t.columns.size()) + " cells");
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_cell(c, line_no));
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw Error(ErrorKind::InvalidInput, "CSV has no column header");
    return t;
}

Table read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
    return parse_csv(in);
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json table_to_json(const Table& t) {
    Json meta = Json::object();
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    Json rows = Json::array();
    for (const auto& r : t.rows) {
        Json row = Json::array();
        for (double x : r) row.push_back(number(x));
        rows.push_back(std::move(row));
    }
    return Json{{"metadata", meta}, {"columns", t.columns}, {"rows", rows}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::InvalidInput, "write failed for " + path.string());
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::InvalidInput, "SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
    return sha256_hex(std::string(std::istreambuf_iterator<char>(in), {}));
}

} // namespace dissfield::io
