#include "tsk/report.hpp"

#include <fstream>

#include <json.hpp>

#include "tsk/errors.hpp"

namespace tsk {

std::string reports_to_json(const std::vector<ExperimentReport>& reports) {
    nlohmann::json doc;
    doc["reports"] = nlohmann::json::array();
    bool all = true;
    for (const ExperimentReport& r : reports) {
        nlohmann::json j;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["data"] = r.json_payload.empty() ? nlohmann::json::object()
                                           : nlohmann::json::parse(r.json_payload);
        doc["reports"].push_back(std::move(j));
        all = all && r.pass;
    }
    doc["pass"] = all;
    return doc.dump(2);
}

std::string reports_to_csv(const std::vector<ExperimentReport>& reports) {
    std::string out;
    for (const ExperimentReport& r : reports) {
        if (r.csv_rows.empty()) continue;
        out += "name";
        for (const std::string& h : r.csv_header) out += "," + h;
        out += "\n";
        for (const auto& row : r.csv_rows) {
            out += r.name;
            for (const std::string& cell : row) out += "," + cell;
            out += "\n";
        }
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << text;
}

}  // namespace tsk
