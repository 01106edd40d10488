#pragma once

#include <cstddef>
#include <vector>

#include "imdp/geometry.hpp"
#include "imdp/query.hpp"
#include "imdp/vi.hpp"

namespace imdp {

/// Exhaustive search over counting strategies and vertex natures for tiny instances.
struct OracleLimits {
    std::size_t max_states = 8;
    std::size_t max_choices = 2;
    int max_bound = 4;
    std::size_t max_strategies = std::size_t{1} << 16;
};

/// Exact per-objective worst-case values of every relevant deterministic counting strategy.
struct BruteForce {
    std::vector<CountingStrategy> strategies;
    std::vector<Vec> values;
};

/// Requires finite bounds; choices at states unreachable at a step are fixed to 0.
BruteForce brute_force_values(const BasicQuery& basic, const OracleLimits& limits = {});

struct WeightedOptimum {
    double value = 0.0;  ///< max over strategies of min over natures of w.V
    Vec g;               ///< per-objective values under the minimizing nature
    CountingStrategy strategy;
};

/// Nature minimizes the w-weighted value; the best strategy is returned.
WeightedOptimum brute_force_weighted(const BasicQuery& basic, const Vec& w, const OracleLimits& limits = {});

struct OracleVerdict {
    bool achievable = false;
    /// Signed max-margin of the thresholds against the closure: positive outside, <= 0 inside.
    double margin = 0.0;
    std::vector<Vec> points;  ///< non-dominated strategy values
};

OracleVerdict brute_force_achievable(const BasicQuery& basic, const OracleLimits& limits = {});

}  // namespace imdp
