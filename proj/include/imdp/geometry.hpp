#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace imdp {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);

/// Achieved points with per-point generator handles and the weights that produced them.
struct PointSet {
    std::vector<Vec> points;
    std::vector<int> tags;
    std::vector<std::vector<Vec>> weights;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    /// Index of a point equal to p within tol, or -1.
    int find(const Vec& p, double tol = 1e-12) const;
    /// Inserts p (or merges with an equal point) and records w; returns its index.
    std::size_t add(const Vec& p, int tag, const Vec& w);
};

/// r is dominated by a convex combination of X. False for empty X.
bool in_downward_closure(const std::vector<Vec>& X, const Vec& r);

struct Separation {
    Vec w;
    double margin = 0.0;
};

/// Weight in the simplex maximizing min_i w.(r - x_i); no precondition check.
Separation max_margin_weight(const std::vector<Vec>& X, const Vec& r,
                             std::optional<std::size_t> positive_coord = std::nullopt);

/// As max_margin_weight, but throws ContractError when r lies inside dwc(X).
Separation separating_weight(const std::vector<Vec>& X, const Vec& r,
                             std::optional<std::size_t> positive_coord = std::nullopt);

inline constexpr double kPositiveWeightFloor = 1e-6;

/// Probability vector p with sum_i p_i x_i >= r maximizing the minimum range-scaled slack.
std::optional<Vec> mixture_weights(const std::vector<Vec>& X, const Vec& r);

/// max { r' : (r', r_2, ..., r_n) in dwc(X) }, or nullopt if no such r'.
std::optional<double> max_first_coordinate(const std::vector<Vec>& X, const Vec& r);

/// Vertices of the downward closure, ascending in coordinate 1 and descending in coordinate 2.
std::vector<Vec> pareto_frontier_2d(const std::vector<Vec>& X);

double distance_to_dwc_2d(const std::vector<Vec>& X, const Vec& p);

}  // namespace imdp
