#pragma once

#include <string>
#include <vector>

namespace schedwin::tabio {

// snprintf-backed formatting; all file output goes through these so reruns
// are byte-identical.
std::string num(double v, const char* fmt = "%.10g");
std::string fixed2(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
};

std::string to_csv(const Table& t);
std::string to_markdown(const Table& t);

void ensure_dir(const std::string& dir);
void write_text(const std::string& path, const std::string& content);

}  // namespace schedwin::tabio
