#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace stratkit {

using ojson = nlohmann::ordered_json;

struct SuiteResult {
    std::string name;
    std::string status = "skipped";  // verified | failed | inconclusive | skipped
    ojson details = ojson::object();
};

struct RunReport {
    ojson config_echo = ojson::object();
    std::vector<SuiteResult> suites;
    std::vector<std::string> artifacts;

    bool any_failed() const;
    ojson to_json() const;  // deterministic; wall-clock lives elsewhere
};

// One float cell, 17 significant digits for round-trip fidelity.
std::string csv_float(double x);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace stratkit
