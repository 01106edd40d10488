#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "imdp/api.hpp"
#include "imdp/generators.hpp"
#include "imdp/io.hpp"
#include "imdp/runtime.hpp"
#include "json.hpp"

namespace {

enum Exit { kOk = 0, kUnachievable = 1, kInputError = 2, kUndecided = 3 };

struct Common {
    std::string model;
    std::string query;
    std::optional<double> epsilon;
    std::optional<std::size_t> max_iters;
    std::string out;
    std::string format = "json";
};

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
    } else {
        imdp::write_file(c.out, text);
    }
}

int exit_for(imdp::Outcome o) {
    switch (o) {
        case imdp::Outcome::Achievable: return kOk;
        case imdp::Outcome::Unachievable: return kUnachievable;
        case imdp::Outcome::Undecided: return kUndecided;
    }
    return kUndecided;
}

struct Loaded {
    imdp::QueryFile file;
    imdp::Prepared prepared;
    imdp::EngineOptions opts;
};

Loaded load(const Common& c, std::optional<imdp::Mode> expected) {
    const imdp::Imdp model = imdp::parse_model(imdp::read_file(c.model));
    Loaded l;
    l.file = imdp::parse_query(imdp::read_file(c.query));
    if (expected && l.file.query.mode != *expected) throw imdp::InputError("query mode does not match the subcommand");
    l.opts = imdp::engine_options(l.file, c.epsilon, c.max_iters);
    l.prepared = imdp::prepare_query(model, l.file.query);
    for (const auto& note : l.prepared.notes) std::cerr << note << "\n";
    return l;
}

void add_common(CLI::App* app, Common& c, bool with_query = true) {
    app->add_option("--model", c.model, "model JSON file")->required();
    if (with_query) app->add_option("--query", c.query, "query JSON file")->required();
    app->add_option("--epsilon", c.epsilon, "value-iteration residual and Pareto accuracy");
    app->add_option("--max-iters", c.max_iters, "cap on generated weight vectors");
    app->add_option("--out", c.out, "output file (default stdout)");
    app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

imdp::NaturePolicy make_nature(const std::string& mode, const imdp::BasicQuery& basic, std::uint64_t seed,
                               const imdp::ViOptions& vo, const imdp::MixtureStrategy& mix) {
    if (mode == "midpoint") return imdp::NaturePolicy::midpoint(basic.model);
    if (mode == "vertex") return imdp::NaturePolicy::fixed_vertex(basic.model, seed);
    // adversarial witnesses of the most likely component under uniform weights
    std::size_t best = 0;
    for (std::size_t i = 1; i < mix.probs.size(); ++i) {
        if (mix.probs[i] > mix.probs[best]) best = i;
    }
    const std::size_t k = static_cast<std::size_t>(basic.k_max());
    const auto comp = imdp::extend_strategy(mix.components[best], k);
    const imdp::Vec w(basic.size(), 1.0 / static_cast<double>(basic.size()));
    const auto vi = imdp::evaluate_strategy_detailed(basic, comp, w, vo);
    return imdp::NaturePolicy::adversarial(basic.model, comp, vi.natures);
}

std::optional<imdp::MixtureStrategy> witness(const Loaded& l) {
    return imdp::witness_mixture(l.prepared, l.file.query, l.opts);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective strategy synthesis for interval MDPs"};
    app.require_subcommand(1);

    Common c;
    auto* validate = app.add_subcommand("validate", "check a model file");
    validate->add_option("--model", c.model, "model JSON file")->required();
    validate->add_option("--out", c.out, "output file (default stdout)");

    auto* synth = app.add_subcommand("synth", "decide achievability of a synth query");
    add_common(synth, c);
    auto* qnt = app.add_subcommand("qnt", "optimize one objective subject to the others");
    add_common(qnt, c);
    auto* pareto = app.add_subcommand("pareto", "approximate a two-objective Pareto curve");
    add_common(pareto, c);

    std::string kind = "mixture", nature = "midpoint";
    std::uint64_t seed = 1;
    auto* strategy = app.add_subcommand("strategy", "export a witness strategy");
    add_common(strategy, c);
    strategy->add_option("--kind", kind, "counting, mixture or randomised")
        ->check(CLI::IsMember({"counting", "mixture", "randomised"}));
    strategy->add_option("--nature", nature, "nature used for frequencies: midpoint, vertex or adversarial")
        ->check(CLI::IsMember({"midpoint", "vertex", "adversarial"}));
    strategy->add_option("--seed", seed, "seed for the vertex nature");

    std::string strategy_file;
    imdp::SimOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimates for a strategy");
    add_common(simulate, c);
    simulate->add_option("--strategy", strategy_file, "strategy JSON (default: synthesized witness)");
    simulate->add_option("--runs", sim.runs, "number of runs");
    simulate->add_option("--horizon", sim.horizon, "maximum steps per run");
    simulate->add_option("--seed", sim.seed, "master seed");
    simulate->add_option("--nature", nature, "midpoint, vertex or adversarial")
        ->check(CLI::IsMember({"midpoint", "vertex", "adversarial"}));

    auto* gen = app.add_subcommand("gen", "generate a case-study model");
    gen->require_subcommand(1);
    gen->add_option("--out", c.out, "output file (default stdout)");
    int antg_n = 14;
    bool no_closed = false;
    auto* antg = gen->add_subcommand("antg", "museum model");
    antg->add_option("--n", antg_n, "grid size (>= 10)");
    antg->add_flag("--open", no_closed, "no closed cells");
    imdp::GridConfig grid;
    std::vector<std::string> obstacles;
    std::string target = "0,1", start = "0,0";
    auto* gridcmd = gen->add_subcommand("grid", "grid-world model");
    gridcmd->add_option("--rows", grid.rows, "rows");
    gridcmd->add_option("--cols", grid.cols, "columns");
    gridcmd->add_option("--obstacle", obstacles, "obstacle cell row,col (repeatable)");
    gridcmd->add_option("--target", target, "target cell row,col");
    gridcmd->add_option("--start", start, "start cell row,col");
    gridcmd->add_option("--slip", grid.slip, "lateral slip probability");
    gridcmd->add_option("--noise", grid.interval_noise, "interval half-width");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (validate->parsed()) {
            const auto model = imdp::parse_model(imdp::read_file(c.model));
            const auto violations = imdp::validate(model);
            nlohmann::json j{{"format_version", imdp::kFormatVersion}, {"valid", violations.empty()}};
            j["violations"] = nlohmann::json::array();
            for (const auto& v : violations) j["violations"].push_back({{"state", v.state}, {"action", v.action}, {"rule", v.rule}});
            emit(c, j.dump(2) + "\n");
            return violations.empty() ? kOk : kInputError;
        }
        if (synth->parsed()) {
            const Loaded l = load(c, imdp::Mode::Synth);
            const auto r = imdp::synthesize(l.prepared.basic, l.opts);
            emit(c, imdp::serialize_result(l.prepared.basic, r));
            return exit_for(r.outcome);
        }
        if (qnt->parsed()) {
            const Loaded l = load(c, imdp::Mode::Qnt);
            const auto r = imdp::quantitative(l.prepared.basic, l.opts);
            emit(c, imdp::serialize_result(l.prepared.basic, r));
            return exit_for(r.outcome);
        }
        if (pareto->parsed()) {
            const Loaded l = load(c, imdp::Mode::Pareto);
            const auto r = imdp::pareto_2d(l.prepared.basic, l.opts);
            emit(c, c.format == "csv" ? imdp::pareto_csv(r) : imdp::serialize_result(l.prepared.basic, r));
            return r.capped ? kUndecided : kOk;
        }
        if (strategy->parsed()) {
            const Loaded l = load(c, std::nullopt);
            const auto mix = witness(l);
            if (!mix) return kUnachievable;
            const auto& m = l.prepared.basic.model;
            if (kind == "mixture") {
                emit(c, imdp::serialize_strategy(m, *mix));
            } else if (kind == "counting") {
                std::size_t best = 0;
                for (std::size_t i = 1; i < mix->probs.size(); ++i) {
                    if (mix->probs[i] > mix->probs[best]) best = i;
                }
                emit(c, imdp::serialize_strategy(m, mix->components[best]));
            } else {
                const auto pol = make_nature(nature, l.prepared.basic, seed, l.opts.vi(), *mix);
                emit(c, imdp::serialize_strategy(m, imdp::randomise(m, imdp::state_action_frequencies(m, *mix, pol))));
            }
            return kOk;
        }
        if (simulate->parsed()) {
            const Loaded l = load(c, std::nullopt);
            const auto& basic = l.prepared.basic;
            std::optional<imdp::MixtureStrategy> mix;
            if (!strategy_file.empty()) {
                mix = imdp::parse_mixture_strategy(basic.model, imdp::read_file(strategy_file));
            } else {
                mix = witness(l);
                if (!mix) return kUnachievable;
            }
            const auto pol = make_nature(nature, basic, sim.seed, l.opts.vi(), *mix);
            emit(c, imdp::serialize_result(imdp::simulate(basic, *mix, pol, sim)));
            return kOk;
        }
        if (antg->parsed()) {
            imdp::AntgConfig cfg;
            cfg.n = antg_n;
            if (!no_closed) cfg = imdp::AntgConfig::default_layout(antg_n);
            emit(c, imdp::serialize_model(imdp::gen_antg(cfg)));
            return kOk;
        }
        if (gridcmd->parsed()) {
            auto cell = [](const std::string& s) {
                const auto comma = s.find(',');
                if (comma == std::string::npos) throw imdp::InputError("cell must be row,col: '" + s + "'");
                try {
                    return std::make_pair(std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1)));
                } catch (const std::exception&) {
                    throw imdp::InputError("cell must be row,col: '" + s + "'");
                }
            };
            for (const auto& o : obstacles) grid.obstacles.push_back(cell(o));
            grid.target = cell(target);
            grid.start = cell(start);
            emit(c, imdp::serialize_model(imdp::gen_grid(grid)));
            return kOk;
        }
    } catch (const imdp::UnachievableError& e) {
        std::cerr << "unachievable: " << e.what() << "\n";
        return kUnachievable;
    } catch (const imdp::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const imdp::DivergenceError& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        return kUndecided;
    } catch (const imdp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
