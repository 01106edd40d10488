#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "imdp/geometry.hpp"
#include "imdp/query.hpp"
#include "imdp/robust.hpp"

namespace imdp {

/// Step-indexed deterministic strategy. Entries are choice positions in Imdp::enabled[s].
/// per_step[j - 1] is used for the j-th action taken (j = 1..k_max), tail afterwards.
struct CountingStrategy {
    std::vector<std::vector<int>> per_step;
    std::vector<int> tail;

    std::size_t k_max() const { return per_step.size(); }
    int choice(int s, std::size_t step) const { return step <= per_step.size() ? per_step[step - 1][s] : tail[s]; }
    bool operator==(const CountingStrategy&) const = default;
};

/// Nature witnesses recorded alongside a strategy, indexed like CountingStrategy.
struct NatureRecord {
    std::vector<std::vector<Distribution>> per_step;
    std::vector<Distribution> tail;

    const Distribution& at(int s, std::size_t step) const {
        return step <= per_step.size() ? per_step[step - 1][s] : tail[s];
    }
};

struct ViOptions {
    double epsilon = 1e-6;
    bool relative = false;
    std::size_t max_iters = 1'000'000;
    Direction nature = Direction::Min;  ///< Max gives a cooperative nature
};

struct ViResult {
    CountingStrategy strategy;
    NatureRecord natures;
    Vec g;
    double weighted = 0.0;  ///< weighted phase value at the initial state
    std::size_t iterations = 0;
};

ViResult weighted_robust_vi(const BasicQuery& basic, const Vec& w, const ViOptions& opts = {});

/// Robust per-objective values of a fixed strategy. With `w`, natures minimize the
/// w-weighted value as in the synthesis loop; without, each objective gets its own
/// worst-case nature.
Vec evaluate_strategy(const BasicQuery& basic, const CountingStrategy& strategy, const ViOptions& opts = {},
                      const std::optional<Vec>& w = std::nullopt);

/// Same evaluation, also returning the natures used (requires `w`).
ViResult evaluate_strategy_detailed(const BasicQuery& basic, const CountingStrategy& strategy, const Vec& w,
                                    const ViOptions& opts = {});

/// Memoryless strategy choosing `choice[s]` at every step.
CountingStrategy memoryless(const std::vector<int>& choice, std::size_t k_max = 0);

/// Pads per_step with tail choices up to k_max steps.
CountingStrategy extend_strategy(CountingStrategy s, std::size_t k_max);

}  // namespace imdp
