#pragma once

#include <vector>

#include "imdp/model.hpp"

namespace imdp {

enum class Direction { Min, Max };

/// Probabilities aligned with IntervalRow::entries.
using Distribution = std::vector<double>;

struct Extremum {
    double value = 0.0;
    Distribution witness;
};

/// Optimum of sum_t p(t) * values[t] over the feasible set of `row`.
/// `values` is indexed by state. Throws ContractError if the row is infeasible.
Extremum robust_extremum(const IntervalRow& row, const std::vector<double>& values, Direction dir);

/// Allocation-free variant for hot loops; `witness` is resized to the row size.
double robust_extremum(const IntervalRow& row, const std::vector<double>& values, Direction dir,
                       Distribution& witness);

/// As above; targets with equal `values` are ordered by `tie` in the same direction, then by index.
double robust_extremum(const IntervalRow& row, const std::vector<double>& values, Direction dir,
                       Distribution& witness, const std::vector<double>* tie);

/// All vertices of the feasible polytope of a row with at most 8 targets.
std::vector<Distribution> vertex_enumerate(const IntervalRow& row);

/// True if `p` respects the bounds of `row` and sums to one within `tol`.
bool is_feasible(const IntervalRow& row, const Distribution& p, double tol = 1e-12);

}  // namespace imdp
