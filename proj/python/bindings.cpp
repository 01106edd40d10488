#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "imdp/api.hpp"
#include "imdp/generators.hpp"
#include "imdp/io.hpp"
#include "imdp/runtime.hpp"

namespace py = pybind11;

namespace {

struct Loaded {
    imdp::QueryFile file;
    imdp::Prepared prepared;
    imdp::EngineOptions opts;
};

Loaded load(const std::string& model_text, const std::string& query_text, imdp::Mode mode,
            std::optional<double> epsilon, std::optional<std::size_t> max_iters) {
    const imdp::Imdp model = imdp::parse_model(model_text);
    Loaded l;
    l.file = imdp::parse_query(query_text);
    if (l.file.query.mode != mode) throw imdp::InputError("query mode does not match the operation");
    l.opts = imdp::engine_options(l.file, epsilon, max_iters);
    l.prepared = imdp::prepare_query(model, l.file.query);
    return l;
}

py::list violations(const std::string& model_text) {
    py::list out;
    for (const auto& v : imdp::validate(imdp::parse_model(model_text))) {
        py::dict d;
        d["state"] = v.state;
        d["action"] = v.action;
        d["rule"] = v.rule;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-objective strategy synthesis for interval MDPs";

    auto base = py::register_exception<imdp::Error>(m, "Error");
    py::register_exception<imdp::InputError>(m, "InputError", base.ptr());
    py::register_exception<imdp::UnachievableError>(m, "UnachievableError", base.ptr());
    py::register_exception<imdp::DivergenceError>(m, "DivergenceError", base.ptr());
    py::register_exception<imdp::ContractError>(m, "ContractError", base.ptr());

    m.attr("FORMAT_VERSION") = imdp::kFormatVersion;

    m.def("validate", &violations, py::arg("model"), "Rule violations of a model given as JSON text.");
    m.def("normalize_model", [](const std::string& text) { return imdp::serialize_model(imdp::parse_model(text)); },
          py::arg("model"), "Parses and re-serializes a model.");

    m.def(
        "synthesize",
        [](const std::string& model, const std::string& query, std::optional<double> epsilon,
           std::optional<std::size_t> max_iters) {
            const Loaded l = load(model, query, imdp::Mode::Synth, epsilon, max_iters);
            const auto r = imdp::synthesize(l.prepared.basic, l.opts);
            return imdp::serialize_result(l.prepared.basic, r);
        },
        py::arg("model"), py::arg("query"), py::arg("epsilon") = py::none(), py::arg("max_iters") = py::none(),
        "Result JSON for a synth query.");

    m.def(
        "quantitative",
        [](const std::string& model, const std::string& query, std::optional<double> epsilon,
           std::optional<std::size_t> max_iters) {
            const Loaded l = load(model, query, imdp::Mode::Qnt, epsilon, max_iters);
            const auto r = imdp::quantitative(l.prepared.basic, l.opts);
            return imdp::serialize_result(l.prepared.basic, r);
        },
        py::arg("model"), py::arg("query"), py::arg("epsilon") = py::none(), py::arg("max_iters") = py::none(),
        "Result JSON for a qnt query.");

    m.def(
        "pareto",
        [](const std::string& model, const std::string& query, std::optional<double> epsilon,
           std::optional<std::size_t> max_iters) {
            const Loaded l = load(model, query, imdp::Mode::Pareto, epsilon, max_iters);
            const auto r = imdp::pareto_2d(l.prepared.basic, l.opts);
            return py::make_tuple(r.vertices, r.capped, imdp::serialize_result(l.prepared.basic, r));
        },
        py::arg("model"), py::arg("query"), py::arg("epsilon") = py::none(), py::arg("max_iters") = py::none(),
        "Returns (vertices, capped, result JSON) for a two-objective Pareto query.");

    m.def(
        "witness",
        [](const std::string& model, const std::string& query, std::optional<double> epsilon,
           std::optional<std::size_t> max_iters) -> std::optional<std::string> {
            const auto parsed = imdp::parse_query(query);
            const Loaded l = load(model, query, parsed.query.mode, epsilon, max_iters);
            const auto mix = imdp::witness_mixture(l.prepared, l.file.query, l.opts);
            if (!mix) return std::nullopt;
            return imdp::serialize_strategy(l.prepared.basic.model, *mix);
        },
        py::arg("model"), py::arg("query"), py::arg("epsilon") = py::none(), py::arg("max_iters") = py::none(),
        "Mixture strategy JSON achieving a synth or qnt query, or None.");

    m.def(
        "simulate",
        [](const std::string& model, const std::string& query, std::size_t runs, std::size_t horizon,
           std::uint64_t seed) -> std::optional<std::string> {
            const auto parsed = imdp::parse_query(query);
            const Loaded l = load(model, query, parsed.query.mode, std::nullopt, std::nullopt);
            const auto mix = imdp::witness_mixture(l.prepared, l.file.query, l.opts);
            if (!mix) return std::nullopt;
            const imdp::SimOptions sim{runs, horizon, seed};
            const auto nature = imdp::NaturePolicy::midpoint(l.prepared.basic.model);
            return imdp::serialize_result(imdp::simulate(l.prepared.basic, *mix, nature, sim));
        },
        py::arg("model"), py::arg("query"), py::arg("runs") = 10'000, py::arg("horizon") = 1'000, py::arg("seed") = 1,
        "Monte-Carlo estimates of the witness under the midpoint nature, or None when unachievable.");

    m.def(
        "gen_antg",
        [](int n, bool closed) {
            imdp::AntgConfig cfg;
            cfg.n = n;
            if (closed) cfg = imdp::AntgConfig::default_layout(n);
            return imdp::serialize_model(imdp::gen_antg(cfg));
        },
        py::arg("n") = 14, py::arg("closed") = true, "Museum model as JSON text.");

    m.def(
        "gen_grid",
        [](int rows, int cols, std::vector<std::pair<int, int>> obstacles, std::pair<int, int> start,
           std::pair<int, int> target, double slip, double noise) {
            imdp::GridConfig cfg;
            cfg.rows = rows;
            cfg.cols = cols;
            cfg.obstacles = std::move(obstacles);
            cfg.start = start;
            cfg.target = target;
            cfg.slip = slip;
            cfg.interval_noise = noise;
            return imdp::serialize_model(imdp::gen_grid(cfg));
        },
        py::arg("rows") = 1, py::arg("cols") = 2, py::arg("obstacles") = std::vector<std::pair<int, int>>{},
        py::arg("start") = std::make_pair(0, 0), py::arg("target") = std::make_pair(0, 1), py::arg("slip") = 0.2,
        py::arg("noise") = 0.0, "Grid-world model as JSON text.");
}
