#pragma once

#include <string>
#include <vector>

namespace tsk {

/// Serializable record of one experiment: config echo, measured quantities,
/// theoretical references, pass/fail. The JSON payload is schemaless; the
/// CSV view is a flat table.
struct ExperimentReport {
    std::string name;
    bool pass = false;
    std::string json_payload;  // JSON object text with config/metrics fields

    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
};

/// One JSON document holding all reports plus an overall pass flag.
std::string reports_to_json(const std::vector<ExperimentReport>& reports);

/// Concatenated CSV: name column plus the union of per-report tables.
std::string reports_to_csv(const std::vector<ExperimentReport>& reports);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace tsk
