#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imdp/geometry.hpp"
#include "imdp/query.hpp"
#include "imdp/vi.hpp"

namespace imdp {

/// Deterministic strategies drawn once at the start of each run.
struct MixtureStrategy {
    std::vector<CountingStrategy> components;
    Vec probs;

    std::size_t k_max() const;
};

/// probs[i][s] is a distribution over the choices of s for the (i+1)-th action;
/// the last row (index k_max) applies from step k_max + 1 on.
struct RandomisedCountingStrategy {
    std::vector<std::vector<Vec>> probs;

    std::size_t k_max() const { return probs.size() - 1; }
    const Vec& row(int s, std::size_t i) const { return probs[std::min(i, k_max())][s]; }
};

enum class NatureMode { Adversarial, FixedVertex, Midpoint };

/// Memoryless, step-aware resolution of the interval uncertainty.
/// dist[i][s][c] is used for the (i+1)-th action; the last layer applies afterwards.
struct NaturePolicy {
    NatureMode mode = NatureMode::Midpoint;
    std::vector<std::vector<std::vector<Distribution>>> dist;

    const Distribution& at(int s, int c, std::size_t i) const {
        return dist[std::min(i, dist.size() - 1)][s][c];
    }

    static NaturePolicy midpoint(const Imdp& model);
    /// A seeded random vertex per (state, choice).
    static NaturePolicy fixed_vertex(const Imdp& model, std::uint64_t seed);
    /// Witnesses recorded by value iteration for the choices of `strategy`; other choices use midpoints.
    static NaturePolicy adversarial(const Imdp& model, const CountingStrategy& strategy, const NatureRecord& record);
};

/// Expected visit counts y[i][s][c]; buckets 0..k_max-1 are single steps, bucket k_max collects the rest.
/// Mass entering a terminal state stops there and is not counted.
struct Frequencies {
    std::vector<std::vector<Vec>> y;

    std::size_t k_max() const { return y.size() - 1; }
};

struct FrequencyOptions {
    double tolerance = 1e-12;
    std::size_t max_steps = 1'000'000;
    /// Defaults to states whose every row is a pure self-loop.
    std::optional<std::vector<bool>> terminal;
};

std::vector<bool> absorbing_states(const Imdp& model);

Frequencies state_action_frequencies(const Imdp& model, const RandomisedCountingStrategy& strategy,
                                     const NaturePolicy& nature, const FrequencyOptions& opts = {});
Frequencies state_action_frequencies(const Imdp& model, const CountingStrategy& strategy,
                                     const NaturePolicy& nature, const FrequencyOptions& opts = {});
/// p-weighted average of the component frequencies.
Frequencies state_action_frequencies(const Imdp& model, const MixtureStrategy& strategy,
                                     const NaturePolicy& nature, const FrequencyOptions& opts = {});

/// Row-normalized frequencies; unvisited states get the uniform distribution.
RandomisedCountingStrategy randomise(const Imdp& model, const Frequencies& freq);

RandomisedCountingStrategy as_randomised(const Imdp& model, const CountingStrategy& s);

/// Re-draws the mixture component at every step. Kept only to demonstrate why mixtures
/// must be drawn once.
RandomisedCountingStrategy naive_remix(const Imdp& model, const MixtureStrategy& s);

struct Unrolled {
    Imdp model;
    std::vector<std::pair<int, int>> back_map;  ///< unrolled state -> (original state, layer)
    std::vector<bool> terminal;                 ///< layer copies of absorbing original states
    std::size_t k_max = 0;
};

/// Copies the state space k_max + 1 times; rewards of a structure with bound k are zeroed in layers >= k.
Unrolled build_unrolled(const Imdp& model, const std::vector<std::string>& structures, const std::vector<int>& bounds);

/// Memoryless strategy on an unrolled model reproducing a counting strategy layer by layer.
RandomisedCountingStrategy unroll_strategy(const Unrolled& u, const RandomisedCountingStrategy& s);

/// Robust per-objective values of a randomised strategy (each objective against its own worst nature).
Vec evaluate_randomised(const BasicQuery& basic, const RandomisedCountingStrategy& s, const ViOptions& opts = {});

/// Values of a randomised strategy under a fixed nature.
Vec evaluate_randomised(const BasicQuery& basic, const RandomisedCountingStrategy& s, const NaturePolicy& nature,
                        const ViOptions& opts = {});

struct SimOptions {
    std::size_t runs = 10'000;
    std::size_t horizon = 1'000;
    std::uint64_t seed = 1;
};

struct SimResult {
    Vec mean;
    Vec half_width;  ///< 95% normal-approximation half-width
    std::size_t runs = 0;
};

SimResult simulate(const BasicQuery& basic, const MixtureStrategy& s, const NaturePolicy& nature,
                   const SimOptions& opts = {});
SimResult simulate(const BasicQuery& basic, const RandomisedCountingStrategy& s, const NaturePolicy& nature,
                   const SimOptions& opts = {});

}  // namespace imdp
