#pragma once

#include <vector>

namespace imdp {

enum class Relation { LessEq, Equal, GreaterEq };

struct LpConstraint {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

/// maximize objective . x subject to constraints; nonneg[j] marks x_j >= 0,
/// other variables are free. An empty nonneg vector means all variables are non-negative.
struct LpProblem {
    std::vector<double> objective;
    std::vector<LpConstraint> constraints;
    std::vector<bool> nonneg;
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

/// Two-phase dense simplex with Bland's rule.
LpResult solve_lp(const LpProblem& problem);

}  // namespace imdp
