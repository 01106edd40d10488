#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "imdp/geometry.hpp"
#include "imdp/model.hpp"
#include "imdp/robust.hpp"

namespace imdp {

/// Step bound standing for an unbounded horizon.
inline constexpr int kInf = std::numeric_limits<int>::max();

enum class ObjKind { Reach, Reward };
enum class Op { Ge, Le };
enum class Mode { Synth, Qnt, Pareto };

struct Objective {
    ObjKind kind = ObjKind::Reward;
    std::vector<std::string> target;  ///< reach only
    std::string structure;            ///< reward only
    Op op = Op::Ge;
    double threshold = 0.0;
    int step_bound = kInf;
};

struct Query {
    Mode mode = Mode::Synth;
    std::vector<Objective> objectives;
    int qnt_index = 0;                     ///< qnt only
    Direction qnt_direction = Direction::Max;
    std::vector<Direction> directions;     ///< pareto only
};

/// Lower-bounded, maximizing form of a query on a (product) model.
struct BasicQuery {
    Imdp model;
    std::vector<std::string> structures;
    std::vector<int> bounds;
    Vec thresholds;
    std::vector<bool> negated;  ///< objective i was multiplied by -1
    /// product state -> (original state, bitmask over reachability objectives)
    std::vector<std::pair<int, std::uint32_t>> back_map;

    std::size_t size() const { return structures.size(); }
    int k_max() const;  ///< largest finite bound, 0 if none
};

/// Operator used for objective i once mode-specific directions are applied.
Op effective_op(const Query& q, std::size_t i);

/// Checks objective references against the model; throws InputError.
void check_query(const Imdp& model, const Query& q);

BasicQuery to_basic_form(const Imdp& model, const Query& q);

/// Moves objective `index` to the front, keeping the others in order.
BasicQuery move_to_front(BasicQuery basic, std::size_t index);

std::vector<std::string> check_assumptions(const Imdp& model, const Query& q);

/// Thrown when pruning removes the initial state.
struct UnachievableError : Error {
    using Error::Error;
};

Imdp prune_reward_divergent(const Imdp& model, const Query& q);

}  // namespace imdp
