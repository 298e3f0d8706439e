#pragma once

#include "stratkit/report.hpp"
#include "stratkit/retract.hpp"

#include <optional>

namespace stratkit {

struct ConfigError : Error {
    using Error::Error;
};

struct CustomTorusSpec {
    std::vector<int> weights;
    double shift = 0.0;
};

struct RunConfig {
    std::string scenario;  // built-in name; empty when custom is set
    std::optional<CustomTorusSpec> custom;
    std::uint64_t seed = 42;
    int verify_samples = 200;
    int retract_samples = 200;
    double verify_tol = 1e-5;
    double retract_tol = 1e-5;
    FlowOptions flow;
    std::vector<std::string> suites;  // empty = every applicable suite
    std::string out_dir = "out";

    static RunConfig from_json(const ojson& j);
    static RunConfig from_file(const std::string& path);
    ojson echo() const;
    void validate() const;
    StratifiedScenario make() const;
    bool suite_requested(const std::string& name) const;
};

struct RunOutcome {
    RunReport report;
    int exit_code = 0;  // 0 pass, 1 suite failure, 2 config error, 3 build error
    ojson timing = ojson::object();
};

// Deterministic pipeline: structure checks, tangential build + verify,
// commutative build + verify, homotopy + retraction metrics, and the
// scenario-specific momentum / Hilbert suites. Writes report.json, timing
// and residual/trajectory CSVs under out_dir when write_files is true.
RunOutcome run(const RunConfig& config, bool write_files = true);

std::string scenario_table(bool json_format, bool color);

}  // namespace stratkit
