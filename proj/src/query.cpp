#include "imdp/query.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace imdp {

namespace {

std::string subset_label(std::uint32_t v, const std::vector<std::size_t>& reach) {
    std::string out = "{";
    bool first = true;
    for (std::size_t b = 0; b < reach.size(); ++b) {
        if (!(v >> b & 1u)) continue;
        if (!first) out += ",";
        out += std::to_string(b + 1);
        first = false;
    }
    return out + "}";
}

struct Offender {
    int state;
    int choice;
    std::string structure;
};

std::vector<Offender> sec_offenders(const Imdp& m, const Query& q) {
    std::vector<std::string> maximizing;
    for (std::size_t i = 0; i < q.objectives.size(); ++i) {
        const auto& o = q.objectives[i];
        if (o.kind == ObjKind::Reward && o.step_bound == kInf && effective_op(q, i) == Op::Ge) {
            maximizing.push_back(o.structure);
        }
    }
    std::vector<Offender> out;
    if (maximizing.empty()) return out;
    const auto reach = reachable_states(m, m.initial);
    for (const auto& sec : strong_end_components(m)) {
        for (const auto& [s, choices] : sec.choices) {
            if (!reach[s]) continue;
            for (int c : choices) {
                for (const auto& name : maximizing) {
                    if (m.reward(name, s, c) > 0.0) {
                        out.push_back({s, c, name});
                        break;
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

int BasicQuery::k_max() const {
    int k = 0;
    for (int b : bounds) {
        if (b != kInf) k = std::max(k, b);
    }
    return k;
}

Op effective_op(const Query& q, std::size_t i) {
    switch (q.mode) {
        case Mode::Synth:
            return q.objectives[i].op;
        case Mode::Qnt:
            if (static_cast<int>(i) == q.qnt_index) return q.qnt_direction == Direction::Max ? Op::Ge : Op::Le;
            return q.objectives[i].op;
        case Mode::Pareto:
            return q.directions.at(i) == Direction::Max ? Op::Ge : Op::Le;
    }
    return Op::Ge;
}

void check_query(const Imdp& m, const Query& q) {
    if (q.objectives.empty()) throw InputError("query has no objectives");
    for (std::size_t i = 0; i < q.objectives.size(); ++i) {
        const auto& o = q.objectives[i];
        const std::string where = "objective " + std::to_string(i + 1) + ": ";
        if (o.step_bound < 0) throw InputError(where + "negative step bound");
        if (o.kind == ObjKind::Reach) {
            if (o.target.empty()) throw InputError(where + "empty target set");
            for (const auto& t : o.target) m.state_index(t);
            const bool optimized = (q.mode == Mode::Qnt && static_cast<int>(i) == q.qnt_index) || q.mode == Mode::Pareto;
            if (!optimized && (o.threshold < 0.0 || o.threshold > 1.0)) {
                throw InputError(where + "reachability threshold outside [0,1]");
            }
        } else {
            m.reward(o.structure);
        }
    }
    if (q.mode == Mode::Qnt && (q.qnt_index < 0 || q.qnt_index >= static_cast<int>(q.objectives.size()))) {
        throw InputError("qnt_index out of range");
    }
    if (q.mode == Mode::Pareto) {
        if (q.objectives.size() != 2) throw InputError("pareto queries need exactly two objectives");
        if (q.directions.size() != 2) throw InputError("pareto queries need two directions");
    }
}

BasicQuery to_basic_form(const Imdp& m, const Query& q) {
    check_query(m, q);
    const std::size_t nobj = q.objectives.size();
    std::vector<std::size_t> reach;
    for (std::size_t i = 0; i < nobj; ++i) {
        if (q.objectives[i].kind == ObjKind::Reach) reach.push_back(i);
    }
    if (reach.size() > 30) throw InputError("too many reachability objectives");

    BasicQuery out;
    for (std::size_t i = 0; i < nobj; ++i) {
        const auto& o = q.objectives[i];
        const bool neg = effective_op(q, i) == Op::Le;
        std::string base = o.kind == ObjKind::Reach ? "reach:" + std::to_string(i + 1) : o.structure;
        out.structures.push_back(neg ? "neg:" + base : base);
        out.negated.push_back(neg);
        out.thresholds.push_back(neg ? -o.threshold : o.threshold);
        int k = o.step_bound;
        if (o.kind == ObjKind::Reach && k != kInf) k += 1;
        out.bounds.push_back(k);
    }
    for (std::size_t i = 0; i < nobj; ++i) {
        if (q.objectives[i].kind == ObjKind::Reward && m.rewards.count(out.structures[i]) &&
            out.negated[i]) {
            throw InputError("structure name '" + out.structures[i] + "' collides with a negated objective");
        }
    }

    // target membership per reach objective, as a bitmask per original state
    std::vector<std::uint32_t> in_target(m.num_states(), 0);
    for (std::size_t b = 0; b < reach.size(); ++b) {
        for (const auto& t : q.objectives[reach[b]].target) in_target[m.state_index(t)] |= 1u << b;
    }

    Imdp& p = out.model;
    p.actions = m.actions;
    std::unordered_map<std::uint64_t, int> index;
    std::deque<int> queue;
    auto intern = [&](int s, std::uint32_t v) {
        const std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) | v;
        auto [it, inserted] = index.try_emplace(key, static_cast<int>(p.states.size()));
        if (inserted) {
            p.states.push_back(reach.empty() ? m.states[s] : "(" + m.states[s] + "," + subset_label(v, reach) + ")");
            p.enabled.emplace_back();
            p.rows.emplace_back();
            out.back_map.emplace_back(s, v);
            queue.push_back(it->second);
        }
        return it->second;
    };

    if (reach.empty()) {
        for (int s = 0; s < static_cast<int>(m.num_states()); ++s) intern(s, 0);
    }
    p.initial = intern(m.initial, 0);

    std::vector<std::vector<std::vector<double>>> values(nobj);
    while (!queue.empty()) {
        const int ps = queue.front();
        queue.pop_front();
        const auto [s, v] = out.back_map[ps];
        const std::uint32_t fresh = in_target[s] & ~v;
        const std::uint32_t next = v | fresh;
        for (std::size_t c = 0; c < m.enabled[s].size(); ++c) {
            IntervalRow row;
            for (const auto& e : m.rows[s][c].entries) row.entries.push_back({intern(e.target, next), e.lower, e.upper});
            p.enabled[ps].push_back(m.enabled[s][c]);
            p.rows[ps].push_back(std::move(row));
        }
        for (std::size_t i = 0; i < nobj; ++i) {
            if (values[i].size() <= static_cast<std::size_t>(ps)) values[i].resize(ps + 1);
            auto& vals = values[i][ps];
            const auto& o = q.objectives[i];
            const double sign = out.negated[i] ? -1.0 : 1.0;
            for (std::size_t c = 0; c < m.enabled[s].size(); ++c) {
                double r = 0.0;
                if (o.kind == ObjKind::Reach) {
                    const auto b = std::find(reach.begin(), reach.end(), i) - reach.begin();
                    r = (fresh >> b & 1u) ? sign : 0.0;
                } else {
                    r = sign * m.reward(o.structure, s, static_cast<int>(c));
                }
                vals.push_back(r + 0.0);
            }
        }
    }
    for (std::size_t i = 0; i < nobj; ++i) {
        values[i].resize(p.states.size());
        p.rewards[out.structures[i]].values = std::move(values[i]);
    }
    return out;
}

BasicQuery move_to_front(BasicQuery b, std::size_t index) {
    auto rotate = [&](auto& v) { std::rotate(v.begin(), v.begin() + static_cast<long>(index), v.begin() + static_cast<long>(index) + 1); };
    if (index >= b.size()) throw ContractError("objective index out of range");
    rotate(b.structures);
    rotate(b.bounds);
    rotate(b.thresholds);
    std::vector<bool> neg(b.negated.begin(), b.negated.end());
    std::rotate(neg.begin(), neg.begin() + static_cast<long>(index), neg.begin() + static_cast<long>(index) + 1);
    b.negated = neg;
    return b;
}

std::vector<std::string> check_assumptions(const Imdp& m, const Query& q) {
    check_query(m, q);
    std::vector<std::string> out;
    std::vector<std::string> seen;
    for (const auto& o : q.objectives) {
        if (o.kind != ObjKind::Reward) continue;
        if (std::find(seen.begin(), seen.end(), o.structure) != seen.end()) continue;
        seen.push_back(o.structure);
        const auto& rs = m.reward(o.structure);
        for (std::size_t s = 0; s < m.num_states(); ++s) {
            for (std::size_t c = 0; c < m.enabled[s].size(); ++c) {
                if (rs.values[s][c] < 0.0) {
                    out.push_back("negative reward in '" + o.structure + "' at (" + m.states[s] + "," +
                                  m.actions[m.enabled[s][c]] + ")");
                }
            }
        }
    }
    bool has_ge = false, has_le = false;
    for (std::size_t i = 0; i < q.objectives.size(); ++i) {
        const auto& o = q.objectives[i];
        if (o.kind != ObjKind::Reward || o.step_bound != kInf) continue;
        (effective_op(q, i) == Op::Ge ? has_ge : has_le) = true;
    }
    if (has_ge && has_le) out.push_back("mixed infinite-horizon directions");
    for (const auto& off : sec_offenders(m, q)) {
        out.push_back("positive reward inside SEC ({" + m.states[off.state] + "}," +
                      m.actions[m.enabled[off.state][off.choice]] + ") under '" + off.structure + "'");
    }
    return out;
}

Imdp prune_reward_divergent(const Imdp& m, const Query& q) {
    check_query(m, q);
    const int n = static_cast<int>(m.num_states());
    std::vector<bool> keep_state(n, true);
    std::vector<std::vector<bool>> keep_choice(n);
    for (int s = 0; s < n; ++s) keep_choice[s].assign(m.enabled[s].size(), true);
    const auto offenders = sec_offenders(m, q);
    if (offenders.empty()) return m;
    for (const auto& off : offenders) keep_choice[off.state][off.choice] = false;

    for (bool changed = true; changed;) {
        changed = false;
        for (int s = 0; s < n; ++s) {
            if (!keep_state[s]) continue;
            bool any = false;
            for (std::size_t c = 0; c < keep_choice[s].size(); ++c) {
                if (!keep_choice[s][c]) continue;
                for (const auto& e : m.rows[s][c].entries) {
                    if (!keep_state[e.target]) {
                        keep_choice[s][c] = false;
                        changed = true;
                        break;
                    }
                }
                any = any || keep_choice[s][c];
            }
            if (!any) {
                keep_state[s] = false;
                changed = true;
            }
        }
    }
    if (!keep_state[m.initial]) {
        throw UnachievableError("pruning divergent rewards removes the initial state");
    }
    return restrict_model(m, keep_state, keep_choice);
}

}  // namespace imdp
