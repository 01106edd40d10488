#include "imdp/engine.hpp"

#include <algorithm>
#include <cmath>

namespace imdp {

namespace {

bool has_infinite_bound(const BasicQuery& b) {
    return std::any_of(b.bounds.begin(), b.bounds.end(), [](int k) { return k == kInf; });
}

std::size_t record(Generated& found, const ViResult& vi, const Vec& w) {
    found.trace.push_back({w, vi.g});
    const int existing = found.points.find(vi.g);
    const int tag = existing >= 0 ? found.points.tags[existing] : static_cast<int>(found.strategies.size());
    if (existing < 0) found.strategies.push_back(vi.strategy);
    return found.points.add(vi.g, tag, w);
}

/// min over strategies of objective 1 diverges to -infinity.
bool first_objective_unbounded_below(const BasicQuery& b) {
    if (b.bounds[0] != kInf) return false;
    const auto& rs = b.model.reward(b.structures[0]);
    const auto reach = reachable_states(b.model, b.model.initial);
    for (const auto& sec : strong_end_components(b.model)) {
        for (const auto& [s, choices] : sec.choices) {
            if (!reach[s]) continue;
            for (int c : choices) {
                if (rs.values[s][c] < 0.0) return true;
            }
        }
    }
    return false;
}

BasicQuery drop_first(const BasicQuery& b) {
    BasicQuery out = b;
    out.structures.erase(out.structures.begin());
    out.bounds.erase(out.bounds.begin());
    out.thresholds.erase(out.thresholds.begin());
    out.negated.erase(out.negated.begin());
    return out;
}

Vec orient(const BasicQuery& b, Vec v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (b.negated[i]) v[i] = -v[i] + 0.0;
    }
    return v;
}

/// Mixture for r, relaxing r slightly when membership held only within tolerance.
std::optional<Vec> mixture_near(const std::vector<Vec>& X, const Vec& r) {
    if (auto p = mixture_weights(X, r)) return p;
    Vec relaxed = r;
    for (double& v : relaxed) v -= 1e-6 * std::max(1.0, std::fabs(v));
    return mixture_weights(X, relaxed);
}

/// With negative infinite-horizon rewards a zero weight lets value iteration pick a
/// non-terminating strategy; such weights are lifted to the positive floor.
Vec vi_weight(const BasicQuery& b, Vec w) {
    bool negative = false;
    for (std::size_t i = 0; i < b.size() && !negative; ++i) {
        if (b.bounds[i] != kInf) continue;
        for (const auto& row : b.model.reward(b.structures[i]).values)
            for (double v : row) negative = negative || v < 0.0;
    }
    if (negative) {
        for (double& v : w) v = std::max(v, kPositiveWeightFloor);
    }
    return w;
}

ViResult solve(const BasicQuery& b, const Vec& w, const ViOptions& vo) {
    return weighted_robust_vi(b, vi_weight(b, w), vo);
}

}  // namespace

double progress_tolerance(const BasicQuery& basic, const EngineOptions& opts, double scale) {
    const double base = has_infinite_bound(basic) ? static_cast<double>(basic.size()) * opts.epsilon : 1e-9;
    return base * std::max(1.0, std::fabs(scale));
}

SynthesisResult synthesize(const BasicQuery& basic, const EngineOptions& opts) {
    SynthesisResult res;
    const Vec& r = basic.thresholds;
    const ViOptions vo = opts.vi();
    for (std::size_t it = 0;; ++it) {
        if (in_downward_closure(res.found.points.points, r)) {
            res.outcome = Outcome::Achievable;
            break;
        }
        const Separation sep = max_margin_weight(res.found.points.points, r);
        if (sep.margin <= 1e-9) {
            res.outcome = Outcome::Achievable;
            break;
        }
        if (it >= opts.max_iters) {
            res.outcome = Outcome::Undecided;
            return res;
        }
        const ViResult vi = solve(basic, sep.w, vo);
        const double wr = dot(sep.w, r);
        const double wg = dot(sep.w, vi.g);
        if (wg < wr - progress_tolerance(basic, opts, wr)) {
            res.found.trace.push_back({sep.w, vi.g});
            res.outcome = Outcome::Unachievable;
            return res;
        }
        record(res.found, vi, sep.w);
    }
    res.mixture = mixture_near(res.found.points.points, r);
    return res;
}

QuantResult quantitative(const BasicQuery& basic, const EngineOptions& opts) {
    QuantResult res;
    const std::size_t n = basic.size();
    const ViOptions vo = opts.vi();
    Vec r = basic.thresholds;
    Generated& found = res.found;

    if (!first_objective_unbounded_below(basic)) {
        BasicQuery single = basic;
        single.structures = {basic.structures[0]};
        single.bounds = {basic.bounds[0]};
        single.thresholds = {0.0};
        single.negated = {false};
        auto& values = single.model.rewards.at(basic.structures[0]).values;
        for (auto& row : values) {
            for (double& v : row) v = -v + 0.0;
        }
        ViOptions coop = vo;
        coop.nature = Direction::Max;
        r[0] = -weighted_robust_vi(single, {1.0}, coop).g[0];
    } else if (n == 1) {
        const ViResult vi = solve(basic, {1.0}, vo);
        record(found, vi, {1.0});
        res.outcome = Outcome::Achievable;
        res.value = basic.negated[0] ? -vi.g[0] : vi.g[0];
        res.mixture = Vec{1.0};
        return res;
    } else {
        // the minimum diverges: seed from a witness of the remaining thresholds
        const BasicQuery rest = drop_first(basic);
        const SynthesisResult sub = synthesize(rest, opts);
        if (sub.outcome != Outcome::Achievable) {
            res.outcome = sub.outcome;
            return res;
        }
        // re-solve on the full query with a floor weight on objective 1 so the seed strategies stay finite
        for (std::size_t i = 0; i < sub.found.points.size(); ++i) {
            Vec w(1, kPositiveWeightFloor);
            const Vec& wr = sub.found.points.weights[i].front();
            w.insert(w.end(), wr.begin(), wr.end());
            record(found, weighted_robust_vi(basic, w, vo), w);
        }
        const auto best = max_first_coordinate(found.points.points, r);
        if (!best) {
            res.outcome = Outcome::Undecided;
            return res;
        }
        r[0] = *best;
    }

    Vec w_last, g_last;
    for (std::size_t it = 0;; ++it) {
        const bool first = w_last.empty();
        if (!first) {
            const bool inside = in_downward_closure(found.points.points, r);
            const double wr = dot(w_last, r);
            if (inside && !(dot(w_last, g_last) > wr + progress_tolerance(basic, opts, wr))) break;
        }
        if (it >= opts.max_iters) {
            res.outcome = Outcome::Undecided;
            res.value = basic.negated[0] ? -r[0] : r[0];
            return res;
        }
        const Separation sep = max_margin_weight(found.points.points, r, 0);
        const ViResult vi = solve(basic, sep.w, vo);
        const double wr = dot(sep.w, r);
        if (dot(sep.w, vi.g) < wr - progress_tolerance(basic, opts, wr)) {
            found.trace.push_back({sep.w, vi.g});
            res.outcome = Outcome::Unachievable;
            return res;
        }
        record(found, vi, sep.w);
        if (const auto best = max_first_coordinate(found.points.points, r)) r[0] = std::max(r[0], *best);
        w_last = sep.w;
        g_last = vi.g;
    }
    res.outcome = Outcome::Achievable;
    res.value = basic.negated[0] ? -r[0] + 0.0 : r[0];
    res.mixture = mixture_near(found.points.points, r);
    return res;
}

ParetoApprox pareto_2d(const BasicQuery& basic, const EngineOptions& opts) {
    if (basic.size() != 2) throw ContractError("pareto_2d needs exactly two objectives");
    ParetoApprox res;
    res.epsilon = opts.epsilon;
    const ViOptions vo = opts.vi();
    Generated& found = res.found;

    auto frontier_indices = [&]() {
        std::vector<int> idx;
        for (const auto& v : pareto_frontier_2d(found.points.points)) idx.push_back(found.points.find(v, 0.0));
        return idx;
    };

    Vec w{1.0, 0.0};
    record(found, solve(basic, w, vo), w);
    std::optional<Vec> next = Vec{0.0, 1.0};
    std::size_t it = 0;
    while (next) {
        if (++it > opts.max_iters) {
            res.capped = true;
            break;
        }
        w = *next;
        next.reset();
        record(found, solve(basic, w, vo), w);
        const std::vector<int> idx = frontier_indices();
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
            const Vec& xa = found.points.points[idx[i]];
            const Vec& xb = found.points.points[idx[i + 1]];
            const auto& ya = found.points.weights[idx[i]];
            const auto& yb = found.points.weights[idx[i + 1]];
            const Vec u = *std::max_element(ya.begin(), ya.end(), [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
            const Vec v = *std::min_element(yb.begin(), yb.end(), [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
            const double det = u[0] * v[1] - u[1] * v[0];
            if (std::fabs(det) < 1e-12) continue;
            const double cu = dot(u, xa), cv = dot(v, xb);
            const Vec p{(cu * v[1] - u[1] * cv) / det, (u[0] * cv - v[0] * cu) / det};
            if (distance_to_dwc_2d(found.points.points, p) >= opts.epsilon) {
                next = max_margin_weight(found.points.points, p).w;
                break;
            }
        }
    }

    std::vector<std::pair<Vec, int>> verts;
    for (int i : frontier_indices()) verts.emplace_back(orient(basic, found.points.points[i]), i);
    std::sort(verts.begin(), verts.end(), [](const auto& a, const auto& b) { return a.first[0] < b.first[0]; });
    for (const auto& [v, i] : verts) {
        res.vertices.push_back(v);
        res.vertex_points.push_back(i);
        res.supports.push_back(found.points.weights[i]);
    }
    return res;
}

}  // namespace imdp
