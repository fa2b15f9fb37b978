#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rdsteady {

enum class ReportFormat { csv, json };

/// Floating point formatted with 17 significant digits, locale-free.
std::string format_double17(double v);

/// A plot-ready table: a fixed header row plus rows of pre-formatted cells.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
};

/// CSV dialect: comma separator, '.' decimal point, LF line endings. The
/// resolved config is embedded as leading "# key=value" comment lines.
std::string to_csv(const Table& table,
                   const std::vector<std::pair<std::string, std::string>>& config_kv);

/// Write `content` to `path`, or to stdout when path is empty. A relative
/// path is resolved against the RDSTEADY_OUTPUT_DIR environment variable
/// when that is set. Throws IoError with the path in the message.
void emit_report(const std::string& content, const std::string& path);

} // namespace rdsteady
