#include "rdsteady/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rdsteady/errors.hpp"

namespace rdsteady {

std::string format_double17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw DomainError("table row has " + std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(columns.size()));
    rows.push_back(std::move(cells));
}

std::string to_csv(const Table& table,
                   const std::vector<std::pair<std::string, std::string>>& config_kv) {
    std::string out;
    for (const auto& [key, value] : config_kv) out += "# " + key + "=" + value + "\n";
    for (size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ",";
        out += table.columns[i];
    }
    out += "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += row[i];
        }
        out += "\n";
    }
    return out;
}

void emit_report(const std::string& content, const std::string& path) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("RDSTEADY_OUTPUT_DIR"); dir && *dir)
            p = std::filesystem::path(dir) / p;
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + p.string() + "'");
}

} // namespace rdsteady
