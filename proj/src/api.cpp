#include "imdp/api.hpp"

namespace imdp {

Prepared prepare_query(const Imdp& model, const Query& query) {
    const auto violations = validate(model);
    if (!violations.empty()) {
        const auto& v = violations.front();
        throw InputError("invalid model at (" + v.state + "," + v.action + "): " + v.rule);
    }
    check_query(model, query);
    Prepared out;
    bool prune = false;
    for (const auto& issue : check_assumptions(model, query)) {
        if (issue.rfind("positive reward inside SEC", 0) == 0) {
            prune = true;
            out.notes.push_back("pruned: " + issue);
        } else {
            throw InputError("query assumption violated: " + issue);
        }
    }
    out.basic = to_basic_form(prune ? prune_reward_divergent(model, query) : model, query);
    if (query.mode == Mode::Qnt) out.basic = move_to_front(std::move(out.basic), static_cast<std::size_t>(query.qnt_index));
    return out;
}

EngineOptions engine_options(const QueryFile& file, std::optional<double> epsilon, std::optional<std::size_t> max_iters) {
    EngineOptions o;
    if (file.epsilon) o.epsilon = *file.epsilon;
    if (file.max_iters) o.max_iters = *file.max_iters;
    if (epsilon) o.epsilon = *epsilon;
    if (max_iters) o.max_iters = *max_iters;
    if (!(o.epsilon > 0.0)) throw InputError("epsilon must be positive");
    return o;
}

std::optional<MixtureStrategy> witness_mixture(const Prepared& prepared, const Query& query, const EngineOptions& opts) {
    if (query.mode == Mode::Qnt) {
        const auto r = quantitative(prepared.basic, opts);
        if (r.outcome != Outcome::Achievable || !r.mixture) return std::nullopt;
        return mixture_of(r.found, *r.mixture);
    }
    if (query.mode != Mode::Synth) throw InputError("strategies are exported for synth or qnt queries");
    const auto r = synthesize(prepared.basic, opts);
    if (!r.achievable() || !r.mixture) return std::nullopt;
    return mixture_of(r.found, *r.mixture);
}

}  // namespace imdp
