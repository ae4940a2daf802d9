// Python bindings. Configs cross the boundary as dicts (via JSON text).
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>

#include "twoscale/oracle/complexity.hpp"
#include "twoscale/oracle/suite.hpp"
#include "twoscale/pipeline/pipeline.hpp"

namespace py = pybind11;
using namespace twoscale;

namespace {

py::object json_mod() { return py::module_::import("json"); }

pipeline::RunConfig config_from(const py::dict& d) {
    const std::string text = py::str(json_mod().attr("dumps")(d));
    return pipeline::run_config_from_json(nlohmann::json::parse(text));
}

py::dict dict_from(const nlohmann::json& j) { return json_mod().attr("loads")(j.dump()); }

pipeline::Options options(const std::string& out, bool force, bool verbose) {
    pipeline::Options o;
    o.out = out;
    o.force = force;
    static std::ostream quiet(nullptr);  // no buffer: writes are dropped
    o.log = verbose ? &std::cerr : &quiet;
    return o;
}

}  // namespace

PYBIND11_MODULE(_twoscale, m) {
    m.doc() = "two-time-scale battery management";

    py::register_exception<pipeline::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<pipeline::MissingDependency>(m, "MissingDependency", PyExc_RuntimeError);
    py::register_exception<pipeline::VerificationFailure>(m, "VerificationFailure", PyExc_RuntimeError);

    m.def("default_config", [] { return dict_from(pipeline::to_json(pipeline::RunConfig{})); });
    m.def("load_config", [](const std::string& path) { return dict_from(pipeline::to_json(pipeline::load_run_config(path))); },
          py::arg("path"));
    m.def("normalize_config", [](const py::dict& d) { return dict_from(pipeline::to_json(config_from(d))); },
          py::arg("config"), "fills defaults and validates");
    m.def("config_hash", [](const py::dict& d) { return pipeline::config_hash(config_from(d)); }, py::arg("config"));

    m.def(
        "run_stage",
        [](const std::string& stage, const py::dict& cfg, const std::string& out, bool force, bool verbose) {
            const auto c = config_from(cfg);
            const auto s = pipeline::stage_from_string(stage);
            py::gil_scoped_release release;
            pipeline::run_stage(s, c, options(out, force, verbose));
        },
        py::arg("stage"), py::arg("config"), py::arg("out"), py::arg("force") = false, py::arg("verbose") = false);
    m.def(
        "run_all",
        [](const py::dict& cfg, const std::string& out, bool force, bool verbose) {
            const auto c = config_from(cfg);
            py::gil_scoped_release release;
            pipeline::run_all(c, options(out, force, verbose));
        },
        py::arg("config"), py::arg("out"), py::arg("force") = false, py::arg("verbose") = false);

    m.def(
        "complexity",
        [](long D, long M, long I) {
            const auto e = oracle::complexity_estimate(D, M, I);
            py::dict d;
            d["flat_ops"] = e.flat_ops;
            d["resource_ops"] = e.resource_ops;
            d["price_ops"] = e.price_ops;
            d["ratio_R"] = e.ratio_R;
            d["ratio_P"] = e.ratio_P;
            d["exact_ratio_R"] = e.exact_ratio_R;
            d["exact_ratio_P"] = e.exact_ratio_P;
            return d;
        },
        py::arg("D"), py::arg("M"), py::arg("I"));

    m.def(
        "oracle_suite",
        [](std::size_t n, std::uint64_t seed, double tol) {
            std::vector<oracle::PropertyResult> res;
            {
                py::gil_scoped_release release;
                res = oracle::run_oracle_suite(n, seed, tol);
            }
            py::list out;
            for (const auto& r : res) {
                py::dict d;
                d["name"] = r.name;
                d["instances"] = r.instances;
                d["failures"] = r.failures;
                d["failing_seeds"] = r.failing_seeds;
                d["max_error"] = r.max_error;
                d["seconds"] = r.seconds;
                d["passed"] = r.passed();
                out.append(d);
            }
            return out;
        },
        py::arg("n") = 50, py::arg("seed") = 1, py::arg("tol") = 1e-9);
}
