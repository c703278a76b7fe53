#include "table_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace schedwin::tabio {

std::string num(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string fixed2(double v) { return num(v, "%.2f"); }

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != header.size()) {
        throw std::logic_error("table: row width does not match header");
    }
    rows.push_back(std::move(cells));
}

namespace {

// Commas and quotes never appear in emitted cells today; quote defensively
// anyway so the format stays valid if they ever do.
std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void append_csv_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(cells[i]);
    }
    out += '\n';
}

}  // namespace

std::string to_csv(const Table& t) {
    std::string out;
    append_csv_row(out, t.header);
    for (const auto& row : t.rows) append_csv_row(out, row);
    return out;
}

std::string to_markdown(const Table& t) {
    std::string out = "|";
    for (const auto& h : t.header) out += " " + h + " |";
    out += "\n|";
    for (std::size_t i = 0; i < t.header.size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& row : t.rows) {
        out += "|";
        for (const auto& c : row) out += " " + c + " |";
        out += "\n";
    }
    return out;
}

void ensure_dir(const std::string& dir) {
    std::filesystem::create_directories(dir);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace schedwin::tabio
