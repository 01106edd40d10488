#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "imdp/geometry.hpp"
#include "imdp/query.hpp"
#include "imdp/vi.hpp"

namespace imdp {

struct EngineOptions {
    double epsilon = 1e-6;        ///< value-iteration residual and Pareto approximation distance
    std::size_t max_iters = 500;  ///< cap on generated weight vectors
    std::size_t vi_max_iters = 1'000'000;
    bool relative_residual = false;

    ViOptions vi() const { return {epsilon, relative_residual, vi_max_iters}; }
};

enum class Outcome { Achievable, Unachievable, Undecided };

struct Iterate {
    Vec w;
    Vec g;
};

/// Points found by the drivers; tags index into `strategies`.
struct Generated {
    PointSet points;
    std::vector<CountingStrategy> strategies;
    std::vector<Iterate> trace;
};

struct SynthesisResult {
    Outcome outcome = Outcome::Undecided;
    Generated found;
    std::optional<Vec> mixture;

    bool achievable() const { return outcome == Outcome::Achievable; }
};

struct QuantResult {
    Outcome outcome = Outcome::Undecided;
    double value = 0.0;  ///< in the direction of the original objective
    Generated found;
    std::optional<Vec> mixture;
};

struct ParetoApprox {
    std::vector<Vec> vertices;          ///< original orientation, ascending in objective 1
    std::vector<std::vector<Vec>> supports;
    std::vector<int> vertex_points;     ///< index into found.points per vertex
    double epsilon = 0.0;
    bool capped = false;
    Generated found;
};

SynthesisResult synthesize(const BasicQuery& basic, const EngineOptions& opts = {});

/// Maximizes objective 1 of `basic` subject to the thresholds of the others.
QuantResult quantitative(const BasicQuery& basic, const EngineOptions& opts = {});

ParetoApprox pareto_2d(const BasicQuery& basic, const EngineOptions& opts = {});

/// Tolerance used when comparing w.g against w.r.
double progress_tolerance(const BasicQuery& basic, const EngineOptions& opts, double scale);

}  // namespace imdp
