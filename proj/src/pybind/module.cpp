#include "stratkit/control.hpp"
#include "stratkit/hilbert.hpp"
#include "stratkit/moment.hpp"
#include "stratkit/retract.hpp"
#include "stratkit/runner.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace stratkit;

namespace {

// Keeps the scenario, control data and homotopy together for python use.
struct PyPipeline {
    std::shared_ptr<StratifiedScenario> scenario;
    std::shared_ptr<ControlData> cd;
    std::shared_ptr<Homotopy> homotopy;
};

PyPipeline build_pipeline(const std::string& name, int verify_samples, double tol,
                          std::uint64_t seed) {
    PyPipeline p;
    p.scenario = std::make_shared<StratifiedScenario>(make_scenario(name));
    p.cd = std::make_shared<ControlData>(build_commutative(*p.scenario));
    VerifyOptions vo;
    vo.samples = verify_samples;
    vo.tol = tol;
    vo.seed = seed;
    verify_precommute(*p.cd, vo);
    verify_commute(*p.cd, vo);
    verify_tangential(*p.cd, vo);
    verify_equivariant(*p.cd, vo);
    p.homotopy = std::make_shared<Homotopy>(build_homotopy(*p.cd));
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "stratified control data and smooth retraction toolkit";

    py::register_exception<Error>(m, "StratkitError");

    py::class_<BumpSpec>(m, "BumpSpec")
        .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
        .def_readonly("a", &BumpSpec::a)
        .def_readonly("b", &BumpSpec::b);

    m.def("bump", [](double a, double b, double t) { return bump({a, b}, t); },
          py::arg("a"), py::arg("b"), py::arg("t"),
          "monotone cutoff: 1 on [0,a], 0 on [b,inf)");

    m.def("exp_h_s",
          [](double a, double b, double s, double t) { return exp_h_s({a, b}, s, t); },
          py::arg("a"), py::arg("b"), py::arg("s"), py::arg("t"));

    m.def(
        "flow_linear",
        [](const Mat& A, const Vec& p, double t) { return flow(linear_field(A), p, t); },
        py::arg("A"), py::arg("p"), py::arg("t"), "flow of the linear field p' = A p");

    m.def("hilbert_d3", [](double x, double y) {
        const auto s = hilbert_d3(vec2(x, y));
        return py::make_tuple(s[0], s[1]);
    });

    m.def(
        "moment",
        [](const std::vector<int>& weights, double shift, const Vec& z) {
            return moment(TorusHamiltonian{weights, shift}, z);
        },
        py::arg("weights"), py::arg("shift"), py::arg("z"));

    m.def(
        "crit_residual",
        [](const std::vector<int>& weights, double shift, const Vec& z) {
            return crit_residual(TorusHamiltonian{weights, shift}, z);
        },
        py::arg("weights"), py::arg("shift"), py::arg("z"));

    m.def(
        "norm_sq_gradient_flow",
        [](const std::vector<int>& weights, double shift, const Vec& z, double T) {
            return norm_sq_gradient_flow(TorusHamiltonian{weights, shift}, z, T);
        },
        py::arg("weights"), py::arg("shift"), py::arg("z"), py::arg("T"));

    m.def("list_scenarios", []() {
        py::list out;
        for (const auto& i : list_scenarios()) {
            py::dict d;
            d["name"] = i.name;
            d["ambient_dim"] = i.ambient_dim;
            d["strata"] = i.stratum_count;
            d["action"] = i.action;
            d["source"] = i.source;
            out.append(std::move(d));
        }
        return out;
    });

    py::class_<PyPipeline>(m, "Pipeline")
        .def(py::init(&build_pipeline), py::arg("scenario"), py::arg("verify_samples") = 60,
             py::arg("tol") = 1e-5, py::arg("seed") = 42)
        .def("scenario_name", [](const PyPipeline& p) { return p.scenario->name; })
        .def("flags",
             [](const PyPipeline& p) {
                 py::dict d;
                 d["precommutative"] = p.cd->precommutative.status;
                 d["commutative"] = p.cd->commutative.status;
                 d["tangential"] = p.cd->tangential.status;
                 d["equivariant"] = p.cd->equivariant.status;
                 return d;
             })
        .def("rho",
             [](const PyPipeline& p, const std::string& stratum, const Vec& v) {
                 return p.cd->tub(stratum).rho(v);
             })
        .def("mult",
             [](const PyPipeline& p, const std::string& stratum, double t, const Vec& v) {
                 return p.cd->tub(stratum).mult(t, v);
             })
        .def("project",
             [](const PyPipeline& p, const std::string& stratum, const Vec& v) {
                 return p.cd->tub(stratum).project(v);
             })
        .def("homotopy",
             [](const PyPipeline& p, double t, const Vec& v) {
                 return p.homotopy->eval(t, v);
             })
        .def("set_residual",
             [](const PyPipeline& p, const Vec& v) { return p.scenario->set_residual(v); });

    m.def(
        "run_scenario",
        [](const std::string& name, const std::string& out_dir, std::uint64_t seed,
           int verify_samples, int retract_samples) {
            ojson j;
            j["scenario"] = name;
            j["seed"] = seed;
            j["samples"]["verify"] = verify_samples;
            j["samples"]["retract"] = retract_samples;
            j["out_dir"] = out_dir;
            RunConfig config = RunConfig::from_json(j);
            const auto outcome = stratkit::run(config, !out_dir.empty());
            py::dict d;
            d["exit_code"] = outcome.exit_code;
            for (const auto& s : outcome.report.suites) d[s.name.c_str()] = s.status;
            return d;
        },
        py::arg("name"), py::arg("out_dir") = "", py::arg("seed") = 42,
        py::arg("verify_samples") = 60, py::arg("retract_samples") = 40);
}
