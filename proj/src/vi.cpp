#include "imdp/vi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace imdp {

namespace {

struct Structures {
    std::vector<const std::vector<std::vector<double>>*> r;
    std::vector<int> k;
};

Structures gather(const BasicQuery& b) {
    Structures out;
    for (std::size_t i = 0; i < b.size(); ++i) {
        out.r.push_back(&b.model.reward(b.structures[i]).values);
        out.k.push_back(b.bounds[i]);
    }
    return out;
}

bool converged(const std::vector<double>& x, const std::vector<double>& y, const ViOptions& o, double& delta) {
    delta = 0.0;
    for (std::size_t s = 0; s < x.size(); ++s) {
        double d = std::fabs(y[s] - x[s]);
        if (o.relative) d /= std::max(1.0, std::fabs(y[s]));
        delta = std::max(delta, d);
    }
    return delta <= o.epsilon;
}

/// Three-phase robust value iteration; `fixed` pins the action choices.
ViResult run(const BasicQuery& b, const Vec& w, const CountingStrategy* fixed, const ViOptions& opts) {
    const Imdp& m = b.model;
    const std::size_t n = b.size();
    const std::size_t ns = m.num_states();
    if (w.size() != n) throw ContractError("weight vector dimension mismatch");
    const Structures st = gather(b);
    const int kmax = b.k_max();
    CountingStrategy expanded;
    if (fixed) {
        if (fixed->tail.size() != ns) throw ContractError("strategy does not cover the model");
        if (fixed->per_step.size() != static_cast<std::size_t>(kmax)) {
            if (!fixed->per_step.empty()) throw ContractError("strategy step range differs from the query horizon");
            expanded = memoryless(fixed->tail, static_cast<std::size_t>(kmax));
            fixed = &expanded;
        }
    }

    ViResult res;
    res.strategy.tail.assign(ns, 0);
    res.natures.tail.resize(ns);

    auto weighted_reward = [&](int s, int c, auto&& active) {
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (active(i)) r += w[i] * (*st.r[i])[s][c];
        }
        return r;
    };
    auto is_inf = [&](std::size_t i) { return st.k[i] == kInf; };

    // Bellman step shared by phases 1 and 3: fills y, choices and witnesses.
    Distribution scratch;
    auto bellman = [&](const std::vector<double>& x, std::vector<double>& y, std::vector<int>& choice,
                       std::vector<Distribution>& nature, auto&& active, std::size_t step,
                       const std::vector<double>* tie) {
        for (std::size_t s = 0; s < ns; ++s) {
            const int si = static_cast<int>(s);
            double best = 0.0;
            int best_c = -1;
            const std::size_t nc = m.enabled[s].size();
            for (std::size_t c = 0; c < nc; ++c) {
                if (fixed && fixed->choice(si, step) != static_cast<int>(c)) continue;
                const double q = weighted_reward(si, static_cast<int>(c), active) +
                                 robust_extremum(m.rows[s][c], x, opts.nature, scratch, tie);
                if (best_c < 0 || q > best) {
                    best = q;
                    best_c = static_cast<int>(c);
                    nature[s] = scratch;
                }
            }
            y[s] = best;
            choice[s] = best_c;
        }
    };

    // phase 1: weighted infinite-horizon iteration; the residual is scaled by the smallest
    // positive weight so lightly weighted objectives still steer the strategy
    double w_min = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_inf(i) && w[i] > 0.0) w_min = std::min(w_min, w[i]);
    }
    ViOptions phase1 = opts;
    phase1.epsilon = opts.epsilon * w_min;
    std::vector<double> x(ns, 0.0), y(ns, 0.0);
    const std::size_t tail_step = std::numeric_limits<std::size_t>::max();
    for (std::size_t it = 0;; ++it) {
        if (it >= opts.max_iters) throw DivergenceError("value iteration did not converge (phase 1)");
        bellman(x, y, res.strategy.tail, res.natures.tail, is_inf, tail_step, nullptr);
        ++res.iterations;
        double delta;
        const bool done = converged(x, y, phase1, delta);
        std::swap(x, y);
        if (done) break;
    }

    // phase 2: per-objective evaluation under sigma^inf and the recorded natures
    std::vector<std::vector<double>> xi(n, std::vector<double>(ns, 0.0)), yi = xi;
    bool any_inf = false;
    for (std::size_t i = 0; i < n; ++i) any_inf = any_inf || is_inf(i);
    for (std::size_t it = 0; any_inf; ++it) {
        if (it >= opts.max_iters) throw DivergenceError("value iteration did not converge (phase 2)");
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_inf(i)) continue;
            for (std::size_t s = 0; s < ns; ++s) {
                const int c = res.strategy.tail[s];
                const auto& row = m.rows[s][c].entries;
                const auto& h = res.natures.tail[s];
                double v = (*st.r[i])[s][c];
                for (std::size_t e = 0; e < row.size(); ++e) v += h[e] * xi[i][row[e].target];
                yi[i][s] = v;
            }
            double delta;
            converged(xi[i], yi[i], opts, delta);
            worst = std::max(worst, delta);
            std::swap(xi[i], yi[i]);
        }
        ++res.iterations;
        if (worst <= opts.epsilon) break;
    }

    // phase 3: finite-horizon backward induction
    res.strategy.per_step.assign(kmax, std::vector<int>(ns, 0));
    res.natures.per_step.assign(kmax, std::vector<Distribution>(ns));
    std::vector<double> tie(ns);
    for (int j = kmax; j >= 1; --j) {
        auto active = [&](std::size_t i) { return st.k[i] >= j; };
        auto& choice = res.strategy.per_step[j - 1];
        auto& nature = res.natures.per_step[j - 1];
        // weighted ties (e.g. zero weights) go to the nature minimizing the summed objectives
        std::fill(tie.begin(), tie.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t s = 0; s < ns; ++s) tie[s] += xi[i][s];
        bellman(x, y, choice, nature, active, static_cast<std::size_t>(j), &tie);
        for (std::size_t i = 0; i < n; ++i) {
            if (!active(i)) continue;
            for (std::size_t s = 0; s < ns; ++s) {
                const int c = choice[s];
                const auto& row = m.rows[s][c].entries;
                double v = (*st.r[i])[s][c];
                for (std::size_t e = 0; e < row.size(); ++e) v += nature[s][e] * xi[i][row[e].target];
                yi[i][s] = v;
            }
            std::swap(xi[i], yi[i]);
        }
        std::swap(x, y);
        ++res.iterations;
    }

    res.g.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.g[i] = xi[i][m.initial] + 0.0;
    res.weighted = x[m.initial];
    if (fixed) res.strategy = *fixed;
    return res;
}

}  // namespace

ViResult weighted_robust_vi(const BasicQuery& basic, const Vec& w, const ViOptions& opts) {
    if (!(opts.epsilon > 0.0)) throw ContractError("epsilon must be positive");
    return run(basic, w, nullptr, opts);
}

ViResult evaluate_strategy_detailed(const BasicQuery& basic, const CountingStrategy& strategy, const Vec& w,
                                    const ViOptions& opts) {
    return run(basic, w, &strategy, opts);
}

Vec evaluate_strategy(const BasicQuery& basic, const CountingStrategy& strategy, const ViOptions& opts,
                      const std::optional<Vec>& w) {
    if (w) return run(basic, *w, &strategy, opts).g;
    const std::size_t n = basic.size();
    Vec g(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        g[i] = run(basic, e, &strategy, opts).g[i];
    }
    return g;
}

CountingStrategy memoryless(const std::vector<int>& choice, std::size_t k_max) {
    CountingStrategy s;
    s.tail = choice;
    s.per_step.assign(k_max, choice);
    return s;
}

CountingStrategy extend_strategy(CountingStrategy s, std::size_t k_max) {
    if (s.per_step.size() > k_max) throw ContractError("strategy already exceeds the requested horizon");
    while (s.per_step.size() < k_max) s.per_step.push_back(s.tail);
    return s;
}

}  // namespace imdp
