#include "stratkit/runner.hpp"

#include "stratkit/hilbert.hpp"
#include "stratkit/moment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace stratkit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct ResidualRow {
    std::string group, property;
    double value;
    int samples;
    std::string status;
};

std::string residual_csv(const std::vector<ResidualRow>& rows) {
    std::ostringstream out;
    out << "group,property,max_residual,samples,status\n";
    for (const auto& r : rows)
        out << r.group << ',' << r.property << ',' << csv_float(r.value) << ',' << r.samples
            << ',' << r.status << '\n';
    return out.str();
}

void add_pair_rows(std::vector<ResidualRow>& rows, const std::vector<PairReport>& reps,
                   int mode /* 0 = pc, 1 = commute, 2 = tangential */) {
    for (const auto& r : reps) {
        const std::string pair = r.lower + "<" + r.higher;
        auto add = [&](const std::string& prop, const PropertyResult& p) {
            rows.push_back({pair, prop, p.max_residual, p.samples, p.status});
        };
        if (mode == 0) {
            add("PC1", r.pc1);
            add("PC2", r.pc2);
        } else if (mode == 1) {
            add("C1", r.c1);
            add("C1_t0", r.c1_t0);
            add("C2", r.c2);
        } else {
            add("tangential", r.tangential);
        }
    }
}

std::string combine_status(std::initializer_list<std::string> statuses) {
    bool inconclusive = false;
    for (const auto& s : statuses) {
        if (s == "failed") return "failed";
        if (s == "inconclusive") inconclusive = true;
    }
    return inconclusive ? "inconclusive" : "verified";
}

enum class PairMode { pc, commute, tangential };

ojson pair_reports_json(const std::vector<PairReport>& reps, PairMode mode) {
    ojson arr = ojson::array();
    for (const auto& r : reps) {
        ojson e;
        e["pair"] = {r.lower, r.higher};
        auto prop = [](const PropertyResult& p) {
            ojson o;
            o["max_residual"] = p.max_residual;
            o["samples"] = p.samples;
            o["status"] = p.status;
            return o;
        };
        switch (mode) {
            case PairMode::pc:
                e["PC1"] = prop(r.pc1);
                e["PC2"] = prop(r.pc2);
                break;
            case PairMode::commute:
                e["C1"] = prop(r.c1);
                e["C1_t0"] = prop(r.c1_t0);
                e["C2"] = prop(r.c2);
                break;
            case PairMode::tangential:
                e["tangential"] = prop(r.tangential);
                break;
        }
        arr.push_back(std::move(e));
    }
    return arr;
}

}  // namespace

RunConfig RunConfig::from_json(const ojson& j) {
    RunConfig c;
    if (j.contains("scenario")) {
        if (!j["scenario"].is_string()) throw ConfigError("scenario must be a string");
        c.scenario = j["scenario"].get<std::string>();
    }
    if (j.contains("custom")) {
        const auto& cu = j["custom"];
        if (!cu.contains("weights") || !cu["weights"].is_array())
            throw ConfigError("custom.weights must be an integer array");
        CustomTorusSpec spec;
        for (const auto& w : cu["weights"]) spec.weights.push_back(w.get<int>());
        spec.shift = cu.value("shift", 0.0);
        c.custom = spec;
    }
    c.seed = j.value("seed", static_cast<std::uint64_t>(42));
    if (j.contains("samples")) {
        c.verify_samples = j["samples"].value("verify", 200);
        c.retract_samples = j["samples"].value("retract", 200);
    }
    if (j.contains("tolerances")) {
        c.verify_tol = j["tolerances"].value("verify", 1e-5);
        c.retract_tol = j["tolerances"].value("retract", 1e-5);
    }
    if (j.contains("flow")) {
        c.flow.rel_tol = j["flow"].value("rel_tol", c.flow.rel_tol);
        c.flow.abs_tol = j["flow"].value("abs_tol", c.flow.abs_tol);
        c.flow.max_steps = j["flow"].value("max_steps", c.flow.max_steps);
        c.flow.tau_min = j["flow"].value("tau_min", c.flow.tau_min);
    }
    if (j.contains("suites"))
        for (const auto& s : j["suites"]) c.suites.push_back(s.get<std::string>());
    c.out_dir = j.value("out_dir", std::string("out"));
    if (const char* env = std::getenv("STRATKIT_OUT")) c.out_dir = env;
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ojson j;
    try {
        j = ojson::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
}

void RunConfig::validate() const {
    if (scenario.empty() && !custom)
        throw ConfigError("config needs a scenario name or a custom block");
    if (!scenario.empty() && custom)
        throw ConfigError("config cannot carry both a scenario name and a custom block");
    if (!scenario.empty() && !is_known_scenario(scenario))
        throw ConfigError("unknown scenario: " + scenario);
    if (!(verify_tol > 0.0) || !(retract_tol > 0.0))
        throw ConfigError("tolerances must be positive");
    if (verify_samples < 1 || retract_samples < 1)
        throw ConfigError("sample counts must be positive");
    try {
        flow.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("flow options: ") + e.what());
    }
    const std::vector<std::string> known = {"structure",  "tangential", "commutative",
                                            "retraction", "momentum",   "hilbert"};
    for (const auto& s : suites)
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw ConfigError("unknown suite: " + s);
}

StratifiedScenario RunConfig::make() const {
    if (custom) return make_custom_torus(custom->weights, custom->shift);
    return make_scenario(scenario);
}

bool RunConfig::suite_requested(const std::string& name) const {
    return suites.empty() || std::find(suites.begin(), suites.end(), name) != suites.end();
}

ojson RunConfig::echo() const {
    ojson j;
    if (!scenario.empty()) j["scenario"] = scenario;
    if (custom) {
        j["custom"]["weights"] = custom->weights;
        j["custom"]["shift"] = custom->shift;
    }
    j["seed"] = seed;
    j["samples"]["verify"] = verify_samples;
    j["samples"]["retract"] = retract_samples;
    j["tolerances"]["verify"] = verify_tol;
    j["tolerances"]["retract"] = retract_tol;
    j["flow"]["rel_tol"] = flow.rel_tol;
    j["flow"]["abs_tol"] = flow.abs_tol;
    j["flow"]["max_steps"] = flow.max_steps;
    j["flow"]["tau_min"] = flow.tau_min;
    j["suites"] = suites.empty() ? ojson::array() : ojson(suites);
    j["out_dir"] = out_dir;
    return j;
}

RunOutcome run(const RunConfig& config, bool write_files) {
    config.validate();
    RunOutcome outcome;
    RunReport& report = outcome.report;
    report.config_echo = config.echo();

    namespace fs = std::filesystem;
    if (write_files) fs::create_directories(config.out_dir);

    const StratifiedScenario scenario = config.make();
    const bool torus_like = scenario.action &&
                            scenario.action->kind == GroupAction::Kind::circle;
    const bool is_d3 = scenario.name == "D3RED";

    VerifyOptions vo;
    vo.samples = config.verify_samples;
    vo.tol = config.verify_tol;
    vo.seed = config.seed;
    vo.flow = config.flow;

    std::optional<ControlData> commutative_cd;
    bool build_failed = false;

    auto emit_csv = [&](const std::string& name, const std::string& content) {
        if (!write_files) return;
        const std::string path = (fs::path(config.out_dir) / name).string();
        write_text_file(path, content);
        report.artifacts.push_back(name);
    };

    // --- structure ---------------------------------------------------------
    if (config.suite_requested("structure")) {
        const auto t0 = Clock::now();
        SuiteResult suite;
        suite.name = "structure";
        const OrderReport rep = order_check(scenario, 20, config.seed);
        std::vector<ResidualRow> rows;
        rows.push_back({"order", "transitive", rep.transitive ? 0.0 : 1.0, 1,
                        rep.transitive ? "verified" : "failed"});
        rows.push_back({"order", "antisymmetric", rep.antisymmetric ? 0.0 : 1.0, 1,
                        rep.antisymmetric ? "verified" : "failed"});
        rows.push_back({"order", "dims_monotone", rep.dims_monotone ? 0.0 : 1.0, 1,
                        rep.dims_monotone ? "verified" : "failed"});
        for (const auto& f : rep.frontier)
            rows.push_back({"frontier " + f.lower + "<" + f.higher, "residual_ratio",
                            f.worst_residual, 1, f.pass ? "verified" : "failed"});
        bool conic_ok = true;
        for (std::size_t i = 0; i < scenario.strata.size(); ++i) {
            for (std::size_t ci = 0; ci < scenario.strata[i].charts.size(); ++ci) {
                const auto crep = chart_conicality_check(
                    scenario.strata[i].charts[ci], scenario, static_cast<int>(i), 40,
                    config.seed);
                const bool ok = crep.failures == 0;
                conic_ok &= ok;
                rows.push_back({"chart " + scenario.strata[i].id + "#" + std::to_string(ci),
                                "conicality", crep.worst_residual, crep.tested,
                                ok ? "verified" : "failed"});
            }
        }
        suite.status = (rep.all_pass() && conic_ok) ? "verified" : "failed";
        suite.details["order_pass"] = rep.all_pass();
        suite.details["conicality_pass"] = conic_ok;
        emit_csv("residuals_structure.csv", residual_csv(rows));
        outcome.timing["structure"] = seconds_since(t0);
        report.suites.push_back(std::move(suite));
    }

    // --- tangential build + verify -----------------------------------------
    std::optional<ControlData> tangential_cd;
    if (config.suite_requested("tangential") || config.suite_requested("commutative") ||
        config.suite_requested("retraction")) {
        const auto t0 = Clock::now();
        SuiteResult suite;
        suite.name = "tangential";
        try {
            tangential_cd = build_tangential(scenario, config.flow);
            auto adj = verify_adjusted(*tangential_cd, vo);
            auto pc = verify_precommute(*tangential_cd, vo);
            auto tan = verify_tangential(*tangential_cd, vo);
            std::vector<ResidualRow> rows;
            add_pair_rows(rows, pc, 0);
            add_pair_rows(rows, tan, 2);
            rows.push_back({"adjusted", "AD1", adj.ad1_overlap.max_residual,
                            adj.ad1_overlap.samples, adj.ad1_overlap.status});
            rows.push_back({"adjusted", "AD2", adj.ad2_incident.max_residual,
                            adj.ad2_incident.samples, adj.ad2_incident.status});
            rows.push_back({"adjusted", "AD3", adj.ad3_disjoint.max_residual,
                            adj.ad3_disjoint.samples, adj.ad3_disjoint.status});
            suite.status = combine_status({tangential_cd->adjusted.status,
                                           tangential_cd->precommutative.status,
                                           tangential_cd->tangential.status});
            suite.details["pairs_pc"] = pair_reports_json(pc, PairMode::pc);
            suite.details["pairs_tangential"] = pair_reports_json(tan, PairMode::tangential);
            suite.details["adjusted"] = {{"AD1", adj.ad1_overlap.status},
                                         {"AD2", adj.ad2_incident.status},
                                         {"AD3", adj.ad3_disjoint.status},
                                         {"AD4", adj.ad4}};
            emit_csv("residuals_tangential.csv", residual_csv(rows));
        } catch (const Error& e) {
            suite.status = "failed";
            suite.details["error"] = e.what();
            build_failed = true;
        }
        outcome.timing["tangential"] = seconds_since(t0);
        if (config.suite_requested("tangential")) report.suites.push_back(std::move(suite));
    }

    // --- commutative build + full verify ------------------------------------
    if (!build_failed && (config.suite_requested("commutative") ||
                          config.suite_requested("retraction"))) {
        const auto t0 = Clock::now();
        SuiteResult suite;
        suite.name = "commutative";
        try {
            commutative_cd = build_commutative(scenario, config.flow);
            auto adj = verify_adjusted(*commutative_cd, vo);
            auto pc = verify_precommute(*commutative_cd, vo);
            auto tan = verify_tangential(*commutative_cd, vo);
            auto com = verify_commute(*commutative_cd, vo);
            auto eq = verify_equivariant(*commutative_cd, vo);
            std::vector<ResidualRow> rows;
            add_pair_rows(rows, pc, 0);
            add_pair_rows(rows, tan, 2);
            add_pair_rows(rows, com, 1);
            rows.push_back({"equivariant", "mult", eq.mult_equivariance.max_residual,
                            eq.mult_equivariance.samples, eq.mult_equivariance.status});
            rows.push_back({"equivariant", "rho", eq.rho_invariance.max_residual,
                            eq.rho_invariance.samples, eq.rho_invariance.status});
            suite.status = combine_status(
                {commutative_cd->adjusted.status, commutative_cd->precommutative.status,
                 commutative_cd->tangential.status, commutative_cd->commutative.status,
                 commutative_cd->equivariant.status});
            suite.details["pairs_pc"] = pair_reports_json(pc, PairMode::pc);
            suite.details["pairs_tangential"] = pair_reports_json(tan, PairMode::tangential);
            suite.details["pairs_c"] = pair_reports_json(com, PairMode::commute);
            suite.details["equivariant"] =
                eq.applicable ? combine_status({eq.mult_equivariance.status,
                                                eq.rho_invariance.status})
                              : std::string("not applicable");
            suite.details["adjusted"] = {{"AD1", adj.ad1_overlap.status},
                                         {"AD2", adj.ad2_incident.status},
                                         {"AD3", adj.ad3_disjoint.status},
                                         {"AD4", adj.ad4}};
            emit_csv("residuals_commutative.csv", residual_csv(rows));
        } catch (const Error& e) {
            suite.status = "failed";
            suite.details["error"] = e.what();
            build_failed = true;
        }
        outcome.timing["commutative"] = seconds_since(t0);
        if (config.suite_requested("commutative")) report.suites.push_back(std::move(suite));
    }

    // --- retraction ----------------------------------------------------------
    if (config.suite_requested("retraction")) {
        const auto t0 = Clock::now();
        SuiteResult suite;
        suite.name = "retraction";
        if (!commutative_cd || build_failed) {
            suite.status = "skipped";
            suite.details["reason"] = "no commutative control data";
        } else {
            try {
                const Homotopy h = build_homotopy(*commutative_cd);
                const RetractionMetrics m =
                    retraction_metrics(h, config.retract_samples, config.seed);
                const bool ok = m.samples >= std::max(10, config.retract_samples / 2) &&
                                m.max_identity_defect == 0.0 &&
                                m.final_residual_p95 <= config.retract_tol &&
                                m.max_final_residual <= 100.0 * config.retract_tol &&
                                m.max_rho_increase <= 1e-6 &&
                                m.max_on_set_drift <= 1e-6 && m.neighbourhood_preserved &&
                                (!scenario.action || m.max_equivariance_defect <= 1e-6);
                suite.status = ok ? "verified" : "failed";
                suite.details["samples"] = m.samples;
                suite.details["identity_defect"] = m.max_identity_defect;
                suite.details["final_residual_p95"] = m.final_residual_p95;
                suite.details["final_residual_max"] = m.max_final_residual;
                suite.details["rho_increase_max"] = m.max_rho_increase;
                suite.details["on_set_drift_max"] = m.max_on_set_drift;
                suite.details["equivariance_defect"] = m.max_equivariance_defect;
                suite.details["neighbourhood_preserved"] = m.neighbourhood_preserved;

                std::ostringstream traj;
                traj << "sample_id,t";
                for (int i = 0; i < scenario.ambient_dim; ++i) traj << ",x" << i;
                for (const auto& st : scenario.strata) traj << ",rho_" << st.id;
                traj << ",c_residual\n";
                for (const auto& row : m.trajectories) {
                    traj << row.sample_id << ',' << csv_float(row.t);
                    for (int i = 0; i < row.point.size(); ++i)
                        traj << ',' << csv_float(row.point[i]);
                    for (double r : row.rho)
                        traj << ',' << (std::isfinite(r) ? csv_float(r) : "inf");
                    traj << ',' << csv_float(row.c_residual) << '\n';
                }
                emit_csv("trajectories.csv", traj.str());
            } catch (const Error& e) {
                suite.status = "failed";
                suite.details["error"] = e.what();
                build_failed = true;
            }
        }
        outcome.timing["retraction"] = seconds_since(t0);
        report.suites.push_back(std::move(suite));
    }

    // --- momentum -------------------------------------------------------------
    if (config.suite_requested("momentum")) {
        const auto t0 = Clock::now();
        SuiteResult suite;
        suite.name = "momentum";
        if (!torus_like) {
            suite.status = "skipped";
            suite.details["reason"] = "scenario has no circle action";
        } else {
            TorusHamiltonian ham{scenario.action->weights, scenario.action->shift};
            auto rng = seeded_rng(config.seed, "momentum:" + scenario.name);
            std::vector<ResidualRow> rows;

            double worst_crit = 0.0;
            const int zero_samples = 1000;
            const int x1 = scenario.stratum_index("X1");
            for (int k = 0; k < zero_samples; ++k) {
                const Vec z = scenario.strata[static_cast<std::size_t>(x1)].sampler(rng);
                worst_crit = std::max(worst_crit, crit_residual(ham, z));
            }
            rows.push_back({"crit", "zero_level_residual", worst_crit, zero_samples,
                            worst_crit <= 1e-12 ? "verified" : "failed"});

            double worst_mu = 0.0;
            for (int k = 0; k < 20; ++k) {
                // Both radii bounded away from zero: starts in the basin of
                // exponential convergence (the axes decay only algebraically).
                Vec z(4);
                for (int j = 0; j < 2; ++j) {
                    const double r =
                        std::uniform_real_distribution<double>(0.3, 1.2)(rng);
                    const double th =
                        std::uniform_real_distribution<double>(0.0, 2.0 * M_PI)(rng);
                    z[2 * j] = r * std::cos(th);
                    z[2 * j + 1] = r * std::sin(th);
                }
                Vec end = z;
                for (int chunk = 0; chunk < 8 && std::abs(moment(ham, end)) > 1e-6;
                     ++chunk)
                    end = norm_sq_gradient_flow(ham, end, 25.0, config.flow);
                worst_mu = std::max(worst_mu, std::abs(moment(ham, end)));
            }
            rows.push_back({"gradient_flow", "endpoint_abs_mu", worst_mu, 20,
                            worst_mu <= 1e-5 ? "verified" : "failed"});

            const Mat xi = circle_weight_generator(ham.weights);
            double worst_q = 0.0, worst_cv = 0.0;
            for (int k = 0; k < 100; ++k) {
                Vec z(4);
                for (int i = 0; i < 4; ++i)
                    z[i] = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
                const Vec q1 = quadratic_moment({xi}, 2.0 * z);
                const Vec q2 = quadratic_moment({xi}, z);
                worst_q = std::max(worst_q, (q1 - 4.0 * q2).norm());
                // Conical invariance of the local model on its zero set.
                const Vec zz = scenario.strata[static_cast<std::size_t>(x1)].sampler(rng);
                if (cv_residual({xi}, Mat(), zz) <= 1e-12)
                    worst_cv = std::max(worst_cv, cv_residual({xi}, Mat(), Vec(0.5 * zz)));
            }
            rows.push_back(
                {"quadratic", "Q_homogeneity", worst_q, 100, worst_q == 0.0 ? "verified" : "failed"});
            rows.push_back({"quadratic", "cv_conical", worst_cv, 100,
                            worst_cv <= 1e-12 ? "verified" : "failed"});

            // Gradient flow versus the homotopy: both land on the zero level.
            if (commutative_cd && !build_failed) {
                const Homotopy h = build_homotopy(*commutative_cd);
                double worst_pair = 0.0;
                int used = 0;
                const auto pts = neighbourhood_samples(*commutative_cd, 40,
                                                       config.seed ^ 0x99);
                for (const Vec& v : pts) {
                    // The gradient flow stalls quadratically at the cone
                    // point; compare on samples away from it.
                    if (v.norm() < 0.35 || used >= 20) continue;
                    ++used;
                    const Vec a = h.eval(1.0, v);
                    Vec b = v;
                    for (int chunk = 0; chunk < 8 && std::abs(moment(ham, b)) > 1e-6;
                         ++chunk)
                        b = norm_sq_gradient_flow(ham, b, 25.0, config.flow);
                    worst_pair = std::max(
                        worst_pair, std::max(std::abs(moment(ham, a)), std::abs(moment(ham, b))));
                }
                rows.push_back({"comparison", "both_reach_zero_level", worst_pair, used,
                                worst_pair <= 1e-5 ? "verified" : "failed"});
            }

            bool ok = true;
            for (const auto& r : rows) ok &= r.status == "verified";
            suite.status = ok ? "verified" : "failed";
            for (const auto& r : rows)
                suite.details[r.group + "." + r.property] = r.value;
            emit_csv("residuals_momentum.csv", residual_csv(rows));
        }
        outcome.timing["momentum"] = seconds_since(t0);
        report.suites.push_back(std::move(suite));
    }

    // --- hilbert ---------------------------------------------------------------
    if (config.suite_requested("hilbert")) {
        const auto t0 = Clock::now();
        SuiteResult suite;
        suite.name = "hilbert";
        if (!is_d3) {
            suite.status = "skipped";
            suite.details["reason"] = "scenario is not the D3 reduction model";
        } else {
            std::vector<ResidualRow> rows;
            const auto [s1, s2] = hilbert_d3(vec2(1, 0));
            const double gen_err = std::abs(s1 - 1.0) + std::abs(s2 - 1.0);
            rows.push_back(
                {"hilbert", "sigma(1,0)", gen_err, 1, gen_err == 0.0 ? "verified" : "failed"});

            const auto img = d3_image_check(1000, config.seed);
            rows.push_back({"hilbert", "image_constraints",
                            static_cast<double>(img.constraint_failures), img.samples,
                            img.constraint_failures == 0 ? "verified" : "failed"});
            rows.push_back({"hilbert", "boundary_classification",
                            static_cast<double>(img.boundary_mismatches), img.samples,
                            img.boundary_mismatches == 0 ? "verified" : "failed"});

            // Gap identity (x^2+y^2)^3 - (x^3-3xy^2)^2 = y^2 (3x^2-y^2)^2.
            auto rng = seeded_rng(config.seed, "hilbert_gap");
            double worst_gap = 0.0;
            for (int k = 0; k < 1000; ++k) {
                const double x = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
                const double y = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
                const double lhs = std::pow(x * x + y * y, 3) -
                                   std::pow(x * x * x - 3.0 * x * y * y, 2);
                const double rhs =
                    y * y * std::pow(3.0 * x * x - y * y, 2);
                worst_gap = std::max(worst_gap,
                                     std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
            }
            rows.push_back({"hilbert", "gap_identity", worst_gap, 1000,
                            worst_gap <= 1e-9 ? "verified" : "failed"});

            const HilbertModel model = d3_hilbert_model();
            auto boundary_image = [](const Vec& w) {
                return w[0] >= 0.0 &&
                       std::abs(w[1] * w[1] - w[0] * w[0] * w[0]) <=
                           1e-9 * (1.0 + w[0] * w[0] * w[0]);
            };
            auto boundary_sampler = [](std::mt19937_64& rng2) {
                const double r = std::uniform_real_distribution<double>(0.2, 1.5)(rng2);
                const double sg =
                    std::uniform_int_distribution<int>(0, 1)(rng2) == 0 ? -1.0 : 1.0;
                return vec2(r * r, sg * r * r * r);
            };
            const auto qh = quasi_homog_check(model, boundary_image, boundary_sampler, 100,
                                              {0.25, 0.5, 0.75}, config.seed);
            rows.push_back({"hilbert", "quasi_homogeneous_boundary",
                            static_cast<double>(qh.failures), qh.tested,
                            qh.pass() ? "verified" : "failed"});

            // Reduction of the verified control data through the Hilbert map.
            if (commutative_cd && !build_failed &&
                commutative_cd->commutative.status == "verified" &&
                commutative_cd->equivariant.status == "verified") {
                try {
                    const auto reduced = reduce_control_data(*commutative_cd, model,
                                                             config.seed);
                    auto rng2 = seeded_rng(config.seed, "reduced_invariants");
                    double worst_law = 0.0, worst_rho = 0.0, worst_id = 0.0;
                    int tested = 0;
                    for (const auto& rn : reduced) {
                        const int idx = commutative_cd->scenario->stratum_index(rn.stratum_id);
                        for (int k = 0; k < 40; ++k) {
                            const Vec p = near_stratum_candidate(
                                *commutative_cd->scenario, idx, 0.7, rng2);
                            const Vec w = model.sigma(p);
                            if (!rn.membership(w)) continue;
                            ++tested;
                            worst_id = std::max(worst_id,
                                                (rn.homothety(1.0, w) - w).norm());
                            const Vec a = rn.homothety(0.5, rn.homothety(0.5, w));
                            const Vec b = rn.homothety(0.25, w);
                            worst_law = std::max(worst_law, (a - b).norm());
                            const double r0 = rn.rho_bar(w);
                            if (std::isfinite(r0)) {
                                const double r1 = rn.rho_bar(rn.homothety(0.5, w));
                                worst_rho = std::max(
                                    worst_rho, std::abs(r1 - 0.25 * r0) / (1.0 + r0));
                            }
                        }
                    }
                    rows.push_back({"reduced", "homothety_law", worst_law, tested,
                                    worst_law <= 1e-8 ? "verified" : "failed"});
                    rows.push_back({"reduced", "identity_at_1", worst_id, tested,
                                    worst_id == 0.0 ? "verified" : "failed"});
                    rows.push_back({"reduced", "rho_homogeneity", worst_rho, tested,
                                    worst_rho <= 1e-6 ? "verified" : "failed"});
                } catch (const Error& e) {
                    rows.push_back({"reduced", "well_defined", 1.0, 0, "failed"});
                    suite.details["reduce_error"] = e.what();
                }
            } else {
                rows.push_back({"reduced", "well_defined", 0.0, 0, "inconclusive"});
            }

            bool ok = true;
            bool inconclusive = false;
            for (const auto& r : rows) {
                if (r.status == "failed") ok = false;
                if (r.status == "inconclusive") inconclusive = true;
            }
            suite.status = !ok ? "failed" : (inconclusive ? "inconclusive" : "verified");
            for (const auto& r : rows)
                suite.details[r.group + "." + r.property] = r.value;
            emit_csv("residuals_hilbert.csv", residual_csv(rows));
        }
        outcome.timing["hilbert"] = seconds_since(t0);
        report.suites.push_back(std::move(suite));
    }

    if (write_files) {
        const auto dir = fs::path(config.out_dir);
        write_text_file((dir / "report.json").string(), report.to_json().dump(2) + "\n");
        report.artifacts.push_back("report.json");
        write_text_file((dir / "timing.json").string(), outcome.timing.dump(2) + "\n");
    }

    outcome.exit_code = build_failed ? 3 : (report.any_failed() ? 1 : 0);
    return outcome;
}

std::string scenario_table(bool json_format, bool color) {
    const auto infos = list_scenarios();
    if (json_format) {
        ojson arr = ojson::array();
        for (const auto& i : infos) {
            ojson e;
            e["name"] = i.name;
            e["ambient_dim"] = i.ambient_dim;
            e["strata"] = i.stratum_count;
            e["action"] = i.action;
            e["source"] = i.source;
            arr.push_back(std::move(e));
        }
        return arr.dump(2) + "\n";
    }
    std::ostringstream out;
    const char* bold = color ? "\033[1m" : "";
    const char* reset = color ? "\033[0m" : "";
    out << bold << "name       dim  strata  action  source" << reset << "\n";
    for (const auto& i : infos) {
        out << i.name;
        for (std::size_t k = i.name.size(); k < 11; ++k) out << ' ';
        out << i.ambient_dim << "    " << i.stratum_count << "       " << i.action;
        for (std::size_t k = i.action.size(); k < 8; ++k) out << ' ';
        out << i.source << "\n";
    }
    return out.str();
}

}  // namespace stratkit
