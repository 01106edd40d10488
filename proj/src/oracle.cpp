#include "imdp/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace imdp {

namespace {

struct Enumeration {
    const BasicQuery& b;
    int K = 0;
    std::vector<std::vector<std::vector<Distribution>>> vertices;  // [s][c]
    std::vector<std::pair<int, int>> slots;                        // (step, state) with a real choice
    std::vector<const std::vector<std::vector<double>>*> r;
};

Enumeration prepare(const BasicQuery& b, const OracleLimits& lim) {
    const Imdp& m = b.model;
    Enumeration e{b, 0, {}, {}, {}};
    if (m.num_states() > lim.max_states) throw ContractError("instance too large for brute force");
    for (int k : b.bounds) {
        if (k == kInf) throw ContractError("brute force needs finite step bounds");
        if (k > lim.max_bound) throw ContractError("step bound too large for brute force");
        e.K = std::max(e.K, k);
    }
    e.vertices.resize(m.num_states());
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        if (m.num_choices(static_cast<int>(s)) > lim.max_choices) throw ContractError("too many actions for brute force");
        for (const auto& row : m.rows[s]) e.vertices[s].push_back(vertex_enumerate(row));
    }
    for (const auto& name : b.structures) e.r.push_back(&m.reward(name).values);

    std::vector<bool> at(m.num_states(), false);
    at[m.initial] = true;
    double count = 1.0;
    for (int j = 1; j <= e.K; ++j) {
        std::vector<bool> next(m.num_states(), false);
        for (std::size_t s = 0; s < m.num_states(); ++s) {
            if (!at[s]) continue;
            if (m.num_choices(static_cast<int>(s)) > 1) {
                e.slots.emplace_back(j, static_cast<int>(s));
                count *= static_cast<double>(m.num_choices(static_cast<int>(s)));
            }
            for (const auto& row : m.rows[s])
                for (const auto& en : row.entries)
                    if (en.upper > 0.0) next[en.target] = true;
        }
        at = std::move(next);
    }
    if (count > static_cast<double>(lim.max_strategies)) throw ContractError("too many strategies for brute force");
    return e;
}

/// Calls f(strategy) for every assignment of the decision slots.
template <class F>
void for_each_strategy(const Enumeration& e, F&& f) {
    const Imdp& m = e.b.model;
    CountingStrategy s;
    s.per_step.assign(e.K, std::vector<int>(m.num_states(), 0));
    s.tail.assign(m.num_states(), 0);
    std::vector<int> digit(e.slots.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < e.slots.size(); ++i) s.per_step[e.slots[i].first - 1][e.slots[i].second] = digit[i];
        f(s);
        std::size_t i = 0;
        for (; i < digit.size(); ++i) {
            const int radix = static_cast<int>(m.num_choices(e.slots[i].second));
            if (++digit[i] < radix) break;
            digit[i] = 0;
        }
        if (i == digit.size()) return;
    }
}

double combine(const Distribution& h, const IntervalRow& row, const std::vector<double>& v) {
    double out = 0.0;
    for (std::size_t t = 0; t < h.size(); ++t) out += h[t] * v[row.entries[t].target];
    return out;
}

Vec per_objective(const Enumeration& e, const CountingStrategy& s) {
    const Imdp& m = e.b.model;
    const std::size_t ns = m.num_states();
    Vec g(e.b.size());
    std::vector<double> v(ns), nv(ns);
    for (std::size_t i = 0; i < e.b.size(); ++i) {
        std::fill(v.begin(), v.end(), 0.0);
        for (int j = e.K; j >= 1; --j) {
            for (std::size_t st = 0; st < ns; ++st) {
                const int c = s.per_step[j - 1][st];
                double worst = std::numeric_limits<double>::infinity();
                for (const auto& h : e.vertices[st][c]) worst = std::min(worst, combine(h, m.rows[st][c], v));
                nv[st] = (j <= e.b.bounds[i] ? (*e.r[i])[st][c] : 0.0) + worst;
            }
            std::swap(v, nv);
        }
        g[i] = v[m.initial] + 0.0;
    }
    return g;
}

/// Nature minimizing w.V; returns the per-objective vector at the initial state.
Vec weighted_worst(const Enumeration& e, const CountingStrategy& s, const Vec& w) {
    const Imdp& m = e.b.model;
    const std::size_t ns = m.num_states(), n = e.b.size();
    std::vector<Vec> v(ns, Vec(n, 0.0)), nv = v;
    for (int j = e.K; j >= 1; --j) {
        for (std::size_t st = 0; st < ns; ++st) {
            const int c = s.per_step[j - 1][st];
            const auto& row = m.rows[st][c];
            double best = std::numeric_limits<double>::infinity();
            Vec pick(n, 0.0);
            for (const auto& h : e.vertices[st][c]) {
                Vec cand(n, 0.0);
                for (std::size_t t = 0; t < h.size(); ++t)
                    for (std::size_t i = 0; i < n; ++i) cand[i] += h[t] * v[row.entries[t].target][i];
                const double val = dot(w, cand);
                if (val < best) {
                    best = val;
                    pick = std::move(cand);
                }
            }
            for (std::size_t i = 0; i < n; ++i) pick[i] += j <= e.b.bounds[i] ? (*e.r[i])[st][c] : 0.0;
            nv[st] = std::move(pick);
        }
        std::swap(v, nv);
    }
    return v[m.initial];
}

/// Distinct points not weakly dominated by another point.
std::vector<Vec> maximal_points(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), std::greater<>());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<Vec> out;
    for (const auto& p : pts) {
        const bool dominated = std::any_of(out.begin(), out.end(), [&](const Vec& q) {
            for (std::size_t i = 0; i < p.size(); ++i)
                if (q[i] < p[i]) return false;
            return true;
        });
        if (!dominated) out.push_back(p);
    }
    return out;
}

}  // namespace

BruteForce brute_force_values(const BasicQuery& basic, const OracleLimits& limits) {
    const Enumeration e = prepare(basic, limits);
    BruteForce out;
    for_each_strategy(e, [&](const CountingStrategy& s) {
        out.strategies.push_back(s);
        out.values.push_back(per_objective(e, s));
    });
    return out;
}

WeightedOptimum brute_force_weighted(const BasicQuery& basic, const Vec& w, const OracleLimits& limits) {
    if (w.size() != basic.size()) throw ContractError("weight vector dimension mismatch");
    const Enumeration e = prepare(basic, limits);
    WeightedOptimum best;
    best.value = -std::numeric_limits<double>::infinity();
    for_each_strategy(e, [&](const CountingStrategy& s) {
        Vec g = weighted_worst(e, s, w);
        const double val = dot(w, g);
        if (val > best.value) {
            best.value = val;
            best.g = std::move(g);
            best.strategy = s;
        }
    });
    return best;
}

OracleVerdict brute_force_achievable(const BasicQuery& basic, const OracleLimits& limits) {
    OracleVerdict v;
    v.points = maximal_points(brute_force_values(basic, limits).values);
    v.achievable = in_downward_closure(v.points, basic.thresholds);
    v.margin = max_margin_weight(v.points, basic.thresholds).margin;
    return v;
}

}  // namespace imdp
