#include "imdp/runtime.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace imdp {

namespace {

constexpr std::size_t kTailLayer = std::numeric_limits<std::size_t>::max();

Distribution midpoint_row(const IntervalRow& row) {
    double lo = 0.0, hi = 0.0;
    for (const auto& e : row.entries) {
        lo += e.lower;
        hi += e.upper;
    }
    const double theta = hi > lo ? (1.0 - lo) / (hi - lo) : 0.0;
    Distribution p(row.entries.size());
    for (std::size_t e = 0; e < p.size(); ++e) {
        const auto& en = row.entries[e];
        p[e] = en.lower + theta * (en.upper - en.lower);
    }
    return p;
}

std::vector<std::vector<Distribution>> midpoint_layer(const Imdp& m) {
    std::vector<std::vector<Distribution>> layer(m.num_states());
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        for (const auto& row : m.rows[s]) layer[s].push_back(midpoint_row(row));
    }
    return layer;
}

Vec one_hot(std::size_t n, int c) {
    Vec v(n, 0.0);
    v[c] = 1.0;
    return v;
}

void check_shape(const Imdp& m, const RandomisedCountingStrategy& s) {
    if (s.probs.empty()) throw ContractError("randomised strategy has no rows");
    for (const auto& layer : s.probs) {
        if (layer.size() != m.num_states()) throw ContractError("randomised strategy does not cover the model");
        for (std::size_t st = 0; st < layer.size(); ++st) {
            if (layer[st].size() != m.num_choices(static_cast<int>(st)))
                throw ContractError("randomised strategy row has the wrong number of choices");
        }
    }
}

double expect(const IntervalRow& row, const Distribution& p, const std::vector<double>& x) {
    double v = 0.0;
    for (std::size_t e = 0; e < p.size(); ++e) v += p[e] * x[row.entries[e].target];
    return v;
}

/// One backward step for objective `i`; `nature` null means worst case.
void backup(const BasicQuery& b, const RandomisedCountingStrategy& s, const NaturePolicy* nature,
            const std::vector<std::vector<double>>& r, bool active, std::size_t layer,
            const std::vector<double>& x, std::vector<double>& y, Distribution& scratch) {
    const Imdp& m = b.model;
    for (std::size_t st = 0; st < m.num_states(); ++st) {
        const int si = static_cast<int>(st);
        const Vec& pr = s.row(si, layer);
        double v = 0.0;
        for (std::size_t c = 0; c < pr.size(); ++c) {
            if (pr[c] == 0.0) continue;
            const auto& row = m.rows[st][c];
            double q = active ? r[st][c] : 0.0;
            if (nature) {
                q += expect(row, nature->at(si, static_cast<int>(c), layer), x);
            } else {
                q += robust_extremum(row, x, Direction::Min, scratch);
            }
            v += pr[c] * q;
        }
        y[st] = v;
    }
}

Vec evaluate(const BasicQuery& b, const RandomisedCountingStrategy& s, const NaturePolicy* nature,
             const ViOptions& opts) {
    const Imdp& m = b.model;
    check_shape(m, s);
    const std::size_t ns = m.num_states();
    const std::size_t horizon = std::max(s.k_max(), static_cast<std::size_t>(b.k_max()));
    Distribution scratch;
    Vec g(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& r = m.reward(b.structures[i]).values;
        const int k = b.bounds[i];
        std::vector<double> x(ns, 0.0), y(ns, 0.0);
        if (k == kInf) {
            for (std::size_t it = 0;; ++it) {
                if (it >= opts.max_iters) throw DivergenceError("strategy evaluation did not converge");
                backup(b, s, nature, r, true, kTailLayer, x, y, scratch);
                double delta = 0.0;
                for (std::size_t st = 0; st < ns; ++st) {
                    double d = std::fabs(y[st] - x[st]);
                    if (opts.relative) d /= std::max(1.0, std::fabs(y[st]));
                    delta = std::max(delta, d);
                }
                std::swap(x, y);
                if (delta <= opts.epsilon) break;
            }
        }
        for (std::size_t j = horizon; j >= 1; --j) {
            backup(b, s, nature, r, k == kInf || static_cast<int>(j) <= k, j - 1, x, y, scratch);
            std::swap(x, y);
        }
        g[i] = x[m.initial] + 0.0;
    }
    return g;
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

int sample(std::mt19937_64& rng, const Vec& p) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x = u(rng);
    int last = -1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        last = static_cast<int>(i);
        x -= p[i];
        if (x < 0.0) return last;
    }
    if (last < 0) throw ContractError("cannot sample from an empty distribution");
    return last;
}

template <class Choose>
SimResult simulate_impl(const BasicQuery& b, const NaturePolicy& nature, const SimOptions& opts,
                        Choose&& choose_for_run) {
    const Imdp& m = b.model;
    const std::size_t n = b.size();
    const auto terminal = absorbing_states(m);
    std::vector<const std::vector<std::vector<double>>*> r;
    for (const auto& name : b.structures) r.push_back(&m.reward(name).values);

    SimResult res;
    res.runs = opts.runs;
    Vec sum(n, 0.0), sq(n, 0.0), total(n);
    for (std::size_t run = 0; run < opts.runs; ++run) {
        std::mt19937_64 rng(run_seed(opts.seed, run));
        auto choose = choose_for_run(rng);
        std::fill(total.begin(), total.end(), 0.0);
        int s = m.initial;
        for (std::size_t j = 1; j <= opts.horizon && !terminal[s]; ++j) {
            const int c = choose(rng, s, j);
            for (std::size_t i = 0; i < n; ++i) {
                const int k = b.bounds[i];
                if (k == kInf || static_cast<int>(j) <= k) total[i] += (*r[i])[s][c];
            }
            const auto& row = m.rows[s][c];
            s = row.entries[sample(rng, nature.at(s, c, j - 1))].target;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double v = b.negated[i] ? -total[i] : total[i];
            sum[i] += v;
            sq[i] += v * v;
        }
    }
    res.mean.resize(n);
    res.half_width.resize(n);
    const double N = static_cast<double>(opts.runs);
    for (std::size_t i = 0; i < n; ++i) {
        res.mean[i] = N > 0 ? sum[i] / N : 0.0;
        const double var = N > 1 ? std::max(0.0, (sq[i] - N * res.mean[i] * res.mean[i]) / (N - 1)) : 0.0;
        res.half_width[i] = N > 0 ? 1.96 * std::sqrt(var / N) : 0.0;
    }
    return res;
}

}  // namespace

std::size_t MixtureStrategy::k_max() const {
    std::size_t k = 0;
    for (const auto& c : components) k = std::max(k, c.k_max());
    return k;
}

NaturePolicy NaturePolicy::midpoint(const Imdp& model) {
    NaturePolicy p;
    p.mode = NatureMode::Midpoint;
    p.dist.push_back(midpoint_layer(model));
    return p;
}

NaturePolicy NaturePolicy::fixed_vertex(const Imdp& model, std::uint64_t seed) {
    NaturePolicy p;
    p.mode = NatureMode::FixedVertex;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> values(model.num_states(), 0.0);
    std::vector<std::vector<Distribution>> layer(model.num_states());
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        for (const auto& row : model.rows[s]) {
            for (const auto& e : row.entries) values[e.target] = u(rng);
            layer[s].push_back(robust_extremum(row, values, Direction::Min).witness);
        }
    }
    p.dist.push_back(std::move(layer));
    return p;
}

NaturePolicy NaturePolicy::adversarial(const Imdp& model, const CountingStrategy& strategy,
                                       const NatureRecord& record) {
    NaturePolicy p;
    p.mode = NatureMode::Adversarial;
    const auto base = midpoint_layer(model);
    const std::size_t k = strategy.k_max();
    if (record.per_step.size() != k || record.tail.size() != model.num_states())
        throw ContractError("nature record does not match the strategy");
    for (std::size_t i = 0; i <= k; ++i) {
        auto layer = base;
        const std::size_t step = i < k ? i + 1 : k + 1;
        for (std::size_t s = 0; s < model.num_states(); ++s) {
            const int si = static_cast<int>(s);
            const auto& h = record.at(si, step);
            if (!h.empty()) layer[s][strategy.choice(si, step)] = h;
        }
        p.dist.push_back(std::move(layer));
    }
    return p;
}

std::vector<bool> absorbing_states(const Imdp& model) {
    std::vector<bool> out(model.num_states(), false);
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        bool loop = !model.rows[s].empty();
        for (const auto& row : model.rows[s]) {
            for (const auto& e : row.entries) loop = loop && e.target == static_cast<int>(s);
        }
        out[s] = loop;
    }
    return out;
}

Frequencies state_action_frequencies(const Imdp& model, const RandomisedCountingStrategy& strategy,
                                     const NaturePolicy& nature, const FrequencyOptions& opts) {
    check_shape(model, strategy);
    const std::size_t ns = model.num_states();
    const std::size_t K = strategy.k_max();
    const std::vector<bool> terminal = opts.terminal ? *opts.terminal : absorbing_states(model);
    if (terminal.size() != ns) throw ContractError("terminal mask does not cover the model");

    Frequencies f;
    f.y.resize(K + 1);
    for (auto& layer : f.y) {
        layer.resize(ns);
        for (std::size_t s = 0; s < ns; ++s) layer[s].assign(model.num_choices(static_cast<int>(s)), 0.0);
    }
    std::vector<double> x(ns, 0.0), next(ns, 0.0);
    if (!terminal[model.initial]) x[model.initial] = 1.0;
    for (std::size_t i = 0;; ++i) {
        double mass = 0.0;
        for (double v : x) mass += v;
        if (mass < opts.tolerance) break;
        if (i >= opts.max_steps) throw DivergenceError("frequency computation did not converge");
        const std::size_t bucket = std::min(i, K);
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < ns; ++s) {
            if (x[s] == 0.0) continue;
            const int si = static_cast<int>(s);
            const Vec& pr = strategy.row(si, i);
            for (std::size_t c = 0; c < pr.size(); ++c) {
                if (pr[c] == 0.0) continue;
                const double flow = x[s] * pr[c];
                f.y[bucket][s][c] += flow;
                const auto& row = model.rows[s][c].entries;
                const auto& h = nature.at(si, static_cast<int>(c), i);
                for (std::size_t e = 0; e < row.size(); ++e) next[row[e].target] += flow * h[e];
            }
        }
        for (std::size_t s = 0; s < ns; ++s) {
            if (terminal[s]) next[s] = 0.0;
        }
        std::swap(x, next);
    }
    return f;
}

Frequencies state_action_frequencies(const Imdp& model, const CountingStrategy& strategy, const NaturePolicy& nature,
                                     const FrequencyOptions& opts) {
    return state_action_frequencies(model, as_randomised(model, strategy), nature, opts);
}

Frequencies state_action_frequencies(const Imdp& model, const MixtureStrategy& strategy, const NaturePolicy& nature,
                                     const FrequencyOptions& opts) {
    if (strategy.components.size() != strategy.probs.size() || strategy.components.empty())
        throw ContractError("mixture needs one probability per component");
    const std::size_t K = strategy.k_max();
    Frequencies out;
    for (std::size_t j = 0; j < strategy.components.size(); ++j) {
        const auto comp = extend_strategy(strategy.components[j], K);
        const Frequencies f = state_action_frequencies(model, comp, nature, opts);
        if (out.y.empty()) {
            out = f;
            for (auto& layer : out.y)
                for (auto& row : layer)
                    for (double& v : row) v = 0.0;
        }
        for (std::size_t i = 0; i < f.y.size(); ++i)
            for (std::size_t s = 0; s < f.y[i].size(); ++s)
                for (std::size_t c = 0; c < f.y[i][s].size(); ++c) out.y[i][s][c] += strategy.probs[j] * f.y[i][s][c];
    }
    return out;
}

RandomisedCountingStrategy randomise(const Imdp& model, const Frequencies& freq) {
    RandomisedCountingStrategy out;
    out.probs.resize(freq.y.size());
    for (std::size_t i = 0; i < freq.y.size(); ++i) {
        if (freq.y[i].size() != model.num_states()) throw ContractError("frequencies do not cover the model");
        out.probs[i].resize(model.num_states());
        for (std::size_t s = 0; s < model.num_states(); ++s) {
            const Vec& y = freq.y[i][s];
            const std::size_t nc = model.num_choices(static_cast<int>(s));
            if (y.size() != nc) throw ContractError("frequencies do not cover the model");
            double total = 0.0;
            for (double v : y) total += v;
            Vec& p = out.probs[i][s];
            if (total > 0.0) {
                p.resize(nc);
                for (std::size_t c = 0; c < nc; ++c) p[c] = y[c] / total;
            } else {
                p.assign(nc, nc ? 1.0 / static_cast<double>(nc) : 0.0);
            }
        }
    }
    return out;
}

RandomisedCountingStrategy as_randomised(const Imdp& model, const CountingStrategy& s) {
    if (s.tail.size() != model.num_states()) throw ContractError("strategy does not cover the model");
    RandomisedCountingStrategy out;
    const std::size_t K = s.k_max();
    out.probs.resize(K + 1);
    for (std::size_t i = 0; i <= K; ++i) {
        for (std::size_t st = 0; st < model.num_states(); ++st) {
            const int si = static_cast<int>(st);
            out.probs[i].push_back(one_hot(model.num_choices(si), s.choice(si, i + 1)));
        }
    }
    return out;
}

RandomisedCountingStrategy naive_remix(const Imdp& model, const MixtureStrategy& s) {
    if (s.components.size() != s.probs.size() || s.components.empty())
        throw ContractError("mixture needs one probability per component");
    const std::size_t K = s.k_max();
    RandomisedCountingStrategy out;
    out.probs.resize(K + 1);
    for (std::size_t i = 0; i <= K; ++i) {
        out.probs[i].resize(model.num_states());
        for (std::size_t st = 0; st < model.num_states(); ++st) {
            const int si = static_cast<int>(st);
            Vec p(model.num_choices(si), 0.0);
            for (std::size_t j = 0; j < s.components.size(); ++j) p[s.components[j].choice(si, i + 1)] += s.probs[j];
            out.probs[i][st] = std::move(p);
        }
    }
    return out;
}

Unrolled build_unrolled(const Imdp& model, const std::vector<std::string>& structures, const std::vector<int>& bounds) {
    if (structures.size() != bounds.size()) throw ContractError("one bound per structure expected");
    std::size_t K = 0;
    for (int k : bounds) {
        if (k < 0) throw ContractError("negative step bound");
        if (k != kInf) K = std::max(K, static_cast<std::size_t>(k));
    }
    const std::size_t ns = model.num_states();
    if ((K + 1) * ns > 10'000'000) throw ContractError("unrolled model too large");

    Unrolled u;
    u.k_max = K;
    Imdp& out = u.model;
    out.actions = model.actions;
    const auto absorbing = absorbing_states(model);
    auto id = [&](std::size_t s, std::size_t layer) { return static_cast<int>(layer * ns + s); };
    for (std::size_t layer = 0; layer <= K; ++layer) {
        for (std::size_t s = 0; s < ns; ++s) {
            out.states.push_back(model.states[s] + "@" + std::to_string(layer));
            out.enabled.push_back(model.enabled[s]);
            std::vector<IntervalRow> rows = model.rows[s];
            const std::size_t to = std::min(layer + 1, K);
            for (auto& row : rows)
                for (auto& e : row.entries) e.target = id(static_cast<std::size_t>(e.target), to);
            out.rows.push_back(std::move(rows));
            u.back_map.emplace_back(static_cast<int>(s), static_cast<int>(layer));
            u.terminal.push_back(absorbing[s]);
        }
    }
    out.initial = id(static_cast<std::size_t>(model.initial), 0);
    for (std::size_t i = 0; i < structures.size(); ++i) {
        const auto& src = model.reward(structures[i]).values;
        auto& dst = out.add_reward(structures[i]);
        for (std::size_t layer = 0; layer <= K; ++layer) {
            const bool active = bounds[i] == kInf || static_cast<int>(layer) < bounds[i];
            if (!active) continue;
            for (std::size_t s = 0; s < ns; ++s) dst.values[static_cast<std::size_t>(id(s, layer))] = src[s];
        }
    }
    return u;
}

RandomisedCountingStrategy unroll_strategy(const Unrolled& u, const RandomisedCountingStrategy& s) {
    RandomisedCountingStrategy out;
    out.probs.resize(1);
    for (const auto& [orig, layer] : u.back_map) out.probs[0].push_back(s.row(orig, static_cast<std::size_t>(layer)));
    return out;
}

Vec evaluate_randomised(const BasicQuery& basic, const RandomisedCountingStrategy& s, const ViOptions& opts) {
    return evaluate(basic, s, nullptr, opts);
}

Vec evaluate_randomised(const BasicQuery& basic, const RandomisedCountingStrategy& s, const NaturePolicy& nature,
                        const ViOptions& opts) {
    return evaluate(basic, s, &nature, opts);
}

SimResult simulate(const BasicQuery& basic, const MixtureStrategy& s, const NaturePolicy& nature,
                   const SimOptions& opts) {
    if (s.components.size() != s.probs.size() || s.components.empty())
        throw ContractError("mixture needs one probability per component");
    return simulate_impl(basic, nature, opts, [&](std::mt19937_64& rng) {
        const CountingStrategy* comp = &s.components[sample(rng, s.probs)];
        return [comp](std::mt19937_64&, int st, std::size_t step) { return comp->choice(st, step); };
    });
}

SimResult simulate(const BasicQuery& basic, const RandomisedCountingStrategy& s, const NaturePolicy& nature,
                   const SimOptions& opts) {
    check_shape(basic.model, s);
    return simulate_impl(basic, nature, opts, [&](std::mt19937_64&) {
        return [&s](std::mt19937_64& rng, int st, std::size_t step) { return sample(rng, s.row(st, step - 1)); };
    });
}

}  // namespace imdp
