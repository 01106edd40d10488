#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace imdp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: unknown ids, bad numbers, schema problems.
struct InputError : Error {
    using Error::Error;
};

/// A documented precondition of an operation was violated.
struct ContractError : Error {
    using Error::Error;
};

/// An iterative procedure hit its cap without converging.
struct DivergenceError : Error {
    using Error::Error;
};

struct Entry {
    int target = 0;
    double lower = 0.0;
    double upper = 0.0;
};

struct IntervalRow {
    std::vector<Entry> entries;
};

/// Per-state rewards, aligned with Imdp::enabled.
struct RewardStructure {
    std::vector<std::vector<double>> values;

    double at(int s, int choice) const { return values[s][choice]; }
};

/// Interval MDP with dense integer state and action indices.
///
/// Choices of a state are addressed by their position in enabled[s]; rows[s][c]
/// holds the interval row of the c-th enabled action of s.
struct Imdp {
    std::vector<std::string> states;
    int initial = 0;
    std::vector<std::string> actions;
    std::vector<std::vector<int>> enabled;
    std::vector<std::vector<IntervalRow>> rows;
    std::map<std::string, RewardStructure> rewards;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_choices(int s) const { return enabled[s].size(); }

    int state_index(std::string_view id) const;
    int action_index(std::string_view id) const;
    /// Position of action a in enabled[s], or -1.
    int choice_of(int s, int a) const;
    const IntervalRow& row(int s, int a) const;
    const RewardStructure& reward(std::string_view name) const;
    double reward(std::string_view name, int s, int choice) const;
    /// Adds an all-zero structure (or returns the existing one).
    RewardStructure& add_reward(const std::string& name);
};

/// Incremental construction from string ids.
class ModelBuilder {
public:
    int state(const std::string& id);
    int action(const std::string& id);
    void set_initial(const std::string& id);
    /// Enables action a in state s; returns the choice position.
    int enable(const std::string& s, const std::string& a);
    void transition(const std::string& s, const std::string& a, const std::string& t,
                    double lower, double upper);
    void reward(const std::string& name, const std::string& s, const std::string& a,
                double value);
    /// Declares a structure even if all its values are zero.
    void declare_reward(const std::string& name);

    Imdp build() const;

private:
    struct PendingReward {
        std::string name;
        int state;
        int action;
        double value;
    };

    Imdp m_;
    bool has_initial_ = false;
    std::unordered_map<std::string, int> state_ids_;
    std::unordered_map<std::string, int> action_ids_;
    std::vector<std::string> declared_;
    std::vector<PendingReward> rewards_;
};

/// Parses "0.25", "1/3", "1e-3".
double parse_probability(std::string_view text);

struct Violation {
    std::string state;
    std::string action;
    std::string rule;
};

std::vector<Violation> validate(const Imdp& model);

/// States reachable from `from` along positive-upper-bound edges.
std::vector<bool> reachable_states(const Imdp& model, int from);
std::vector<bool> reachable_states(const Imdp& model, const std::string& from);

/// Strong end-component: states plus, per member state, the retained choices.
struct Sec {
    std::vector<int> states;
    std::map<int, std::vector<int>> choices;
};

std::vector<Sec> strong_end_components(const Imdp& model);

/// Keeps only the given states and choices; transitions into dropped states are removed.
/// keep_choice[s][c] selects choice c of state s. Intended for pruning procedures.
Imdp restrict_model(const Imdp& model, const std::vector<bool>& keep_state,
                    const std::vector<std::vector<bool>>& keep_choice);

}  // namespace imdp
