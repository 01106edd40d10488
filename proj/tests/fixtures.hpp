#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "imdp/model.hpp"
#include "imdp/query.hpp"
#include "imdp/vi.hpp"

namespace fixtures {

/// Three states s, t, u; two actions with interval rows out of s, absorbing t and u.
inline imdp::Imdp running_example() {
    imdp::ModelBuilder b;
    b.state("s");
    b.state("t");
    b.state("u");
    b.set_initial("s");
    b.transition("s", "a", "t", 1.0 / 3, 2.0 / 3);
    b.transition("s", "a", "u", 0.1, 1.0);
    b.transition("s", "b", "t", 0.4, 0.6);
    b.transition("s", "b", "u", 0.25, 2.0 / 3);
    b.transition("t", "a", "t", 1.0, 1.0);
    b.transition("u", "b", "u", 1.0, 1.0);
    b.reward("r", "s", "a", 3.0);
    b.reward("r", "s", "b", 1.0);
    return b.build();
}

inline imdp::Objective reach(std::vector<std::string> target, imdp::Op op, double p, int k) {
    imdp::Objective o;
    o.kind = imdp::ObjKind::Reach;
    o.target = std::move(target);
    o.op = op;
    o.threshold = p;
    o.step_bound = k;
    return o;
}

inline imdp::Objective reward(std::string name, imdp::Op op, double r, int k) {
    imdp::Objective o;
    o.kind = imdp::ObjKind::Reward;
    o.structure = std::move(name);
    o.op = op;
    o.threshold = r;
    o.step_bound = k;
    return o;
}

/// (P >= p [F<=1 t], R{r} >= r [<=1]) on the running example.
inline imdp::Query running_synth(double p, double r) {
    imdp::Query q;
    q.mode = imdp::Mode::Synth;
    q.objectives = {reach({"t"}, imdp::Op::Ge, p, 1), reward("r", imdp::Op::Ge, r, 1)};
    return q;
}

inline imdp::Query running_pareto() {
    imdp::Query q = running_synth(0.0, 0.0);
    q.mode = imdp::Mode::Pareto;
    q.directions = {imdp::Direction::Max, imdp::Direction::Max};
    return q;
}

/// Five-state chain with deterministic rows: s -a-> t (reward 1), s -b-> u, u -a-> v, u -b-> w (reward 1).
inline imdp::Imdp mixture_chain() {
    imdp::ModelBuilder b;
    for (const char* s : {"s", "t", "u", "v", "w"}) b.state(s);
    b.set_initial("s");
    b.transition("s", "a", "t", 1.0, 1.0);
    b.transition("s", "b", "u", 1.0, 1.0);
    b.transition("u", "a", "v", 1.0, 1.0);
    b.transition("u", "b", "w", 1.0, 1.0);
    for (const char* s : {"t", "v", "w"}) {
        b.transition(s, "a", s, 1.0, 1.0);
        b.transition(s, "b", s, 1.0, 1.0);
    }
    b.reward("r", "s", "a", 1.0);
    b.reward("r", "u", "b", 1.0);
    return b.build();
}

inline imdp::Query chain_query() {
    imdp::Query q;
    q.objectives = {reward("r", imdp::Op::Ge, 0.0, imdp::kInf)};
    return q;
}

/// Random feasible interval row over distinct targets drawn from [0, num_states).
inline imdp::IntervalRow random_row(std::mt19937_64& rng, int num_states, int max_targets, double width = 0.3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> pool(num_states);
    for (int i = 0; i < num_states; ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(max_targets, num_states)));
    std::vector<double> p(k);
    double total = 0.0;
    for (double& v : p) total += (v = 0.05 + u(rng));
    imdp::IntervalRow row;
    for (int i = 0; i < k; ++i) {
        const double c = p[i] / total;
        double lo = std::max(1e-3, c - width * u(rng));
        double hi = std::min(1.0, c + width * u(rng));
        if (k == 1) lo = hi = 1.0;
        row.entries.push_back({pool[i], lo, hi});
    }
    return row;
}

struct RandomModelSpec {
    int states = 4;
    int actions = 2;
    int max_targets = 3;
    int structures = 2;
    bool sink = false;  ///< add an absorbing last state reachable from every row
};

/// Random model; reward structures are named "r0", "r1", ... with values in [0, 1).
inline imdp::Imdp random_model(std::mt19937_64& rng, const RandomModelSpec& spec) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    imdp::Imdp m;
    const int ns = spec.states + (spec.sink ? 1 : 0);
    for (int s = 0; s < ns; ++s) m.states.push_back("q" + std::to_string(s));
    for (int a = 0; a < spec.actions; ++a) m.actions.push_back("a" + std::to_string(a));
    m.initial = 0;
    m.enabled.resize(ns);
    m.rows.resize(ns);
    for (int s = 0; s < ns; ++s) {
        if (spec.sink && s == ns - 1) {
            m.enabled[s] = {0};
            m.rows[s] = {imdp::IntervalRow{{{s, 1.0, 1.0}}}};
            continue;
        }
        const int na = 1 + static_cast<int>(rng() % static_cast<unsigned>(spec.actions));
        for (int a = 0; a < na; ++a) {
            m.enabled[s].push_back(a);
            imdp::IntervalRow row = random_row(rng, spec.states, spec.max_targets);
            if (spec.sink) {
                // rescale the row and route at least a tenth of the mass to the sink
                const double keep = 0.5 + 0.4 * u(rng);
                for (auto& e : row.entries) {
                    e.lower *= keep;
                    e.upper *= keep;
                }
                row.entries.push_back({ns - 1, 1.0 - keep, 1.0 - keep});
            }
            m.rows[s].push_back(std::move(row));
        }
    }
    for (int i = 0; i < spec.structures; ++i) {
        auto& rs = m.add_reward("r" + std::to_string(i));
        for (int s = 0; s < ns; ++s) {
            if (spec.sink && s == ns - 1) continue;
            for (double& v : rs.values[s]) v = u(rng);
        }
    }
    return m;
}

/// Basic query over the reward structures of `m` with the given bounds and zero thresholds.
inline imdp::BasicQuery direct_basic(const imdp::Imdp& m, const std::vector<int>& bounds) {
    imdp::BasicQuery b;
    b.model = m;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        b.structures.push_back("r" + std::to_string(i));
        b.bounds.push_back(bounds[i]);
        b.thresholds.push_back(0.0);
        b.negated.push_back(false);
    }
    for (std::size_t s = 0; s < m.num_states(); ++s) b.back_map.emplace_back(static_cast<int>(s), 0u);
    return b;
}

inline int choice(const imdp::Imdp& m, const std::string& s, const std::string& a) {
    return m.choice_of(m.state_index(s), m.action_index(a));
}

}  // namespace fixtures
