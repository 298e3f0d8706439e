#include "stratkit/report.hpp"

#include "stratkit/common.hpp"

#include <cstdio>
#include <fstream>

namespace stratkit {

bool RunReport::any_failed() const {
    for (const auto& s : suites)
        if (s.status == "failed") return true;
    return false;
}

ojson RunReport::to_json() const {
    ojson j;
    j["config"] = config_echo;
    j["suites"] = ojson::array();
    for (const auto& s : suites) {
        ojson e;
        e["name"] = s.name;
        e["status"] = s.status;
        e["details"] = s.details;
        j["suites"].push_back(std::move(e));
    }
    j["artifacts"] = artifacts;
    return j;
}

std::string csv_float(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
}

}  // namespace stratkit
