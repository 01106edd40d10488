#include "imdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

#include "imdp/graph.hpp"

namespace imdp {

namespace {

constexpr double kSumTol = 1e-9;

std::string format_row_id(const Imdp& m, int s, int c) {
    return m.states[s] + "," + m.actions[m.enabled[s][c]];
}

}  // namespace

int Imdp::state_index(std::string_view id) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == id) return static_cast<int>(i);
    }
    throw InputError("unknown state '" + std::string(id) + "'");
}

int Imdp::action_index(std::string_view id) const {
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (actions[i] == id) return static_cast<int>(i);
    }
    throw InputError("unknown action '" + std::string(id) + "'");
}

int Imdp::choice_of(int s, int a) const {
    const auto& en = enabled[s];
    auto it = std::find(en.begin(), en.end(), a);
    return it == en.end() ? -1 : static_cast<int>(it - en.begin());
}

const IntervalRow& Imdp::row(int s, int a) const {
    int c = choice_of(s, a);
    if (c < 0) throw InputError("action '" + actions[a] + "' not enabled in state '" + states[s] + "'");
    return rows[s][c];
}

const RewardStructure& Imdp::reward(std::string_view name) const {
    auto it = rewards.find(std::string(name));
    if (it == rewards.end()) throw InputError("unknown reward structure '" + std::string(name) + "'");
    return it->second;
}

double Imdp::reward(std::string_view name, int s, int choice) const {
    return reward(name).at(s, choice);
}

RewardStructure& Imdp::add_reward(const std::string& name) {
    auto [it, inserted] = rewards.try_emplace(name);
    if (inserted) {
        it->second.values.resize(states.size());
        for (std::size_t s = 0; s < states.size(); ++s) it->second.values[s].assign(enabled[s].size(), 0.0);
    }
    return it->second;
}

int ModelBuilder::state(const std::string& id) {
    auto [it, inserted] = state_ids_.try_emplace(id, static_cast<int>(m_.states.size()));
    if (inserted) {
        m_.states.push_back(id);
        m_.enabled.emplace_back();
        m_.rows.emplace_back();
    }
    return it->second;
}

int ModelBuilder::action(const std::string& id) {
    auto [it, inserted] = action_ids_.try_emplace(id, static_cast<int>(m_.actions.size()));
    if (inserted) m_.actions.push_back(id);
    return it->second;
}

void ModelBuilder::set_initial(const std::string& id) {
    m_.initial = state(id);
    has_initial_ = true;
}

int ModelBuilder::enable(const std::string& s, const std::string& a) {
    int si = state(s);
    int ai = action(a);
    int c = m_.choice_of(si, ai);
    if (c >= 0) return c;
    m_.enabled[si].push_back(ai);
    m_.rows[si].emplace_back();
    return static_cast<int>(m_.enabled[si].size()) - 1;
}

void ModelBuilder::transition(const std::string& s, const std::string& a, const std::string& t,
                              double lower, double upper) {
    int c = enable(s, a);
    int ti = state(t);
    m_.rows[state_ids_.at(s)][c].entries.push_back({ti, lower, upper});
}

void ModelBuilder::reward(const std::string& name, const std::string& s, const std::string& a,
                          double value) {
    rewards_.push_back({name, state(s), action(a), value});
}

void ModelBuilder::declare_reward(const std::string& name) { declared_.push_back(name); }

Imdp ModelBuilder::build() const {
    if (!has_initial_) throw InputError("initial state not set");
    Imdp m = m_;
    for (const auto& name : declared_) m.add_reward(name);
    for (const auto& r : rewards_) {
        auto& rs = m.add_reward(r.name);
        int c = m.choice_of(r.state, r.action);
        if (c < 0) {
            throw InputError("reward '" + r.name + "' on non-enabled pair (" + m.states[r.state] + "," +
                             m.actions[r.action] + ")");
        }
        rs.values[r.state][c] = r.value;
    }
    return m;
}

double parse_probability(std::string_view text) {
    std::string s(text);
    auto parse_real = [&](const std::string& part) {
        if (part.empty()) throw InputError("malformed number '" + s + "'");
        char* end = nullptr;
        double v = std::strtod(part.c_str(), &end);
        if (end != part.c_str() + part.size() || !std::isfinite(v)) {
            throw InputError("malformed number '" + s + "'");
        }
        return v;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) return parse_real(s);
    double p = parse_real(s.substr(0, slash));
    double q = parse_real(s.substr(slash + 1));
    if (q == 0.0) throw InputError("zero denominator in '" + s + "'");
    return p / q;
}

std::vector<Violation> validate(const Imdp& m) {
    std::vector<Violation> out;
    const int n = static_cast<int>(m.states.size());
    if (m.initial < 0 || m.initial >= n) out.push_back({"", "", "initial state is not a declared state"});
    for (int s = 0; s < n; ++s) {
        const std::string& sid = m.states[s];
        if (m.enabled[s].empty()) out.push_back({sid, "", "state has no enabled action"});
        for (std::size_t c = 0; c < m.enabled[s].size(); ++c) {
            const int a = m.enabled[s][c];
            const std::string aid = (a >= 0 && a < static_cast<int>(m.actions.size())) ? m.actions[a] : "?";
            if (aid == "?") out.push_back({sid, "", "enabled action is not declared"});
            const auto& row = m.rows[s][c];
            if (row.entries.empty()) {
                out.push_back({sid, aid, "row has no transitions"});
                continue;
            }
            long double lo = 0, hi = 0;
            std::set<int> seen;
            for (const auto& e : row.entries) {
                if (e.target < 0 || e.target >= n) {
                    out.push_back({sid, aid, "transition to unknown state"});
                    continue;
                }
                if (!seen.insert(e.target).second) {
                    out.push_back({sid, aid, "duplicate target '" + m.states[e.target] + "'"});
                }
                if (!(e.lower > 0.0)) out.push_back({sid, aid, "lower bound must be > 0"});
                if (e.upper > 1.0) out.push_back({sid, aid, "upper bound must be <= 1"});
                if (e.lower > e.upper) out.push_back({sid, aid, "lower bound exceeds upper bound"});
                lo += e.lower;
                hi += e.upper;
            }
            if (lo > 1.0L + kSumTol) out.push_back({sid, aid, "lower bounds exceed 1"});
            if (hi < 1.0L - kSumTol) out.push_back({sid, aid, "upper bounds sum below 1"});
        }
    }
    for (const auto& [name, rs] : m.rewards) {
        bool ok = rs.values.size() == m.states.size();
        for (std::size_t s = 0; ok && s < m.states.size(); ++s) ok = rs.values[s].size() == m.enabled[s].size();
        if (!ok) out.push_back({"", "", "reward structure '" + name + "' does not match enabled pairs"});
    }
    return out;
}

std::vector<bool> reachable_states(const Imdp& m, int from) {
    if (from < 0 || from >= static_cast<int>(m.num_states())) throw InputError("unknown state index");
    std::vector<bool> seen(m.num_states(), false);
    std::vector<int> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (const auto& row : m.rows[s]) {
            for (const auto& e : row.entries) {
                if (e.upper > 0.0 && !seen[e.target]) {
                    seen[e.target] = true;
                    stack.push_back(e.target);
                }
            }
        }
    }
    return seen;
}

std::vector<bool> reachable_states(const Imdp& m, const std::string& from) {
    return reachable_states(m, m.state_index(from));
}

std::vector<Sec> strong_end_components(const Imdp& m) {
    const int n = static_cast<int>(m.num_states());
    std::vector<std::vector<bool>> live(n);
    std::vector<bool> alive(n, true);
    for (int s = 0; s < n; ++s) live[s].assign(m.enabled[s].size(), true);

    std::vector<int> comp;
    for (;;) {
        std::vector<std::vector<int>> adj(n);
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            for (std::size_t c = 0; c < live[s].size(); ++c) {
                if (!live[s][c]) continue;
                for (const auto& e : m.rows[s][c].entries) adj[s].push_back(e.target);
            }
        }
        comp = strongly_connected_components(adj);
        bool changed = false;
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            bool any = false;
            for (std::size_t c = 0; c < live[s].size(); ++c) {
                if (!live[s][c]) continue;
                for (const auto& e : m.rows[s][c].entries) {
                    if (!alive[e.target] || comp[e.target] != comp[s]) {
                        live[s][c] = false;
                        changed = true;
                        break;
                    }
                }
                any = any || live[s][c];
            }
            if (!any) {
                alive[s] = false;
                changed = true;
            }
        }
        if (!changed) break;
    }

    std::map<int, Sec> by_comp;
    for (int s = 0; s < n; ++s) {
        if (!alive[s]) continue;
        Sec& sec = by_comp[comp[s]];
        sec.states.push_back(s);
        auto& cs = sec.choices[s];
        for (std::size_t c = 0; c < live[s].size(); ++c) {
            if (live[s][c]) cs.push_back(static_cast<int>(c));
        }
    }
    std::vector<Sec> out;
    for (auto& [id, sec] : by_comp) out.push_back(std::move(sec));
    std::sort(out.begin(), out.end(), [](const Sec& a, const Sec& b) { return a.states.front() < b.states.front(); });
    return out;
}

Imdp restrict_model(const Imdp& m, const std::vector<bool>& keep_state,
                    const std::vector<std::vector<bool>>& keep_choice) {
    const int n = static_cast<int>(m.num_states());
    if (!keep_state[m.initial]) throw ContractError("restriction drops the initial state");
    std::vector<int> remap(n, -1);
    Imdp out;
    for (int s = 0; s < n; ++s) {
        if (!keep_state[s]) continue;
        remap[s] = static_cast<int>(out.states.size());
        out.states.push_back(m.states[s]);
    }
    out.initial = remap[m.initial];
    out.actions = m.actions;
    out.enabled.resize(out.states.size());
    out.rows.resize(out.states.size());
    for (const auto& [name, rs] : m.rewards) out.rewards[name].values.resize(out.states.size());
    for (int s = 0; s < n; ++s) {
        if (remap[s] < 0) continue;
        const int t = remap[s];
        for (std::size_t c = 0; c < m.enabled[s].size(); ++c) {
            if (!keep_choice[s][c]) continue;
            IntervalRow row;
            for (const auto& e : m.rows[s][c].entries) {
                if (remap[e.target] < 0) {
                    throw ContractError("kept choice (" + format_row_id(m, s, static_cast<int>(c)) +
                                        ") leads to a dropped state");
                }
                row.entries.push_back({remap[e.target], e.lower, e.upper});
            }
            out.enabled[t].push_back(m.enabled[s][c]);
            out.rows[t].push_back(std::move(row));
            for (const auto& [name, rs] : m.rewards) out.rewards[name].values[t].push_back(rs.values[s][c]);
        }
    }
    return out;
}

}  // namespace imdp
