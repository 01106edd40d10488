#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imdp/engine.hpp"
#include "imdp/io.hpp"
#include "imdp/query.hpp"

namespace imdp {

struct Prepared {
    BasicQuery basic;
    std::vector<std::string> notes;  ///< pruned end-component actions, if any
};

/// Validates the model, checks query assumptions, prunes reward-divergent end components and
/// builds the basic form. In qnt mode the optimized objective is moved to the front.
/// Throws InputError for invalid models or violated assumptions and UnachievableError when
/// pruning removes the initial state.
Prepared prepare_query(const Imdp& model, const Query& query);

/// Settings stored with the query, overridden by explicit values.
EngineOptions engine_options(const QueryFile& file, std::optional<double> epsilon = std::nullopt,
                             std::optional<std::size_t> max_iters = std::nullopt);

/// Mixture achieving a synth or qnt query, or nullopt when none was found.
std::optional<MixtureStrategy> witness_mixture(const Prepared& prepared, const Query& query, const EngineOptions& opts);

}  // namespace imdp
