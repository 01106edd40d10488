#include "imdp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imdp/lp.hpp"
#include "imdp/model.hpp"

namespace imdp {

namespace {

constexpr double kMemberTol = 1e-9;

void check_dims(const std::vector<Vec>& X, const Vec& r) {
    for (const auto& x : X) {
        if (x.size() != r.size()) throw ContractError("point dimension mismatch");
    }
}

double cross(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double segment_distance(const Vec& p, const Vec& a, const Vec& b) {
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy));
}

}  // namespace

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

int PointSet::find(const Vec& p, double tol) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool same = points[i].size() == p.size();
        for (std::size_t k = 0; same && k < p.size(); ++k) same = std::fabs(points[i][k] - p[k]) <= tol;
        if (same) return static_cast<int>(i);
    }
    return -1;
}

std::size_t PointSet::add(const Vec& p, int tag, const Vec& w) {
    if (!points.empty() && points.front().size() != p.size()) throw ContractError("point dimension mismatch");
    int i = find(p);
    if (i < 0) {
        points.push_back(p);
        tags.push_back(tag);
        weights.emplace_back();
        i = static_cast<int>(points.size()) - 1;
    }
    weights[i].push_back(w);
    return static_cast<std::size_t>(i);
}

bool in_downward_closure(const std::vector<Vec>& X, const Vec& r) {
    check_dims(X, r);
    if (X.empty()) return false;
    const std::size_t m = X.size(), n = r.size();
    LpProblem lp;
    lp.objective.assign(m, 0.0);
    lp.constraints.push_back({Vec(m, 1.0), Relation::Equal, 1.0});
    for (std::size_t k = 0; k < n; ++k) {
        Vec row(m);
        for (std::size_t i = 0; i < m; ++i) row[i] = X[i][k];
        lp.constraints.push_back({row, Relation::GreaterEq, r[k] - kMemberTol});
    }
    return solve_lp(lp).status == LpStatus::Optimal;
}

Separation max_margin_weight(const std::vector<Vec>& X, const Vec& r, std::optional<std::size_t> positive_coord) {
    check_dims(X, r);
    const std::size_t n = r.size();
    if (positive_coord && *positive_coord >= n) throw ContractError("positive coordinate out of range");
    if (X.empty()) return {Vec(n, 1.0 / static_cast<double>(n)), std::numeric_limits<double>::infinity()};

    // variables: w_1..w_n >= 0, t free
    LpProblem lp;
    lp.objective.assign(n + 1, 0.0);
    lp.objective[n] = 1.0;
    lp.nonneg.assign(n + 1, true);
    lp.nonneg[n] = false;
    Vec sum(n + 1, 1.0);
    sum[n] = 0.0;
    lp.constraints.push_back({sum, Relation::Equal, 1.0});
    for (const auto& x : X) {
        Vec row(n + 1);
        for (std::size_t k = 0; k < n; ++k) row[k] = r[k] - x[k];
        row[n] = -1.0;
        lp.constraints.push_back({row, Relation::GreaterEq, 0.0});
    }
    if (positive_coord) {
        Vec row(n + 1, 0.0);
        row[*positive_coord] = 1.0;
        lp.constraints.push_back({row, Relation::GreaterEq, kPositiveWeightFloor});
    }
    LpResult res = solve_lp(lp);
    if (res.status != LpStatus::Optimal) throw ContractError("separation LP failed");
    Separation sep;
    sep.w.assign(res.x.begin(), res.x.begin() + static_cast<long>(n));
    double total = 0.0;
    for (double& v : sep.w) {
        v = std::max(v, 0.0);
        total += v;
    }
    for (double& v : sep.w) v /= total;
    sep.margin = std::numeric_limits<double>::infinity();
    for (const auto& x : X) {
        double m = 0.0;
        for (std::size_t k = 0; k < n; ++k) m += sep.w[k] * (r[k] - x[k]);
        sep.margin = std::min(sep.margin, m);
    }
    return sep;
}

Separation separating_weight(const std::vector<Vec>& X, const Vec& r, std::optional<std::size_t> positive_coord) {
    Separation sep = max_margin_weight(X, r, positive_coord);
    if (sep.margin < kMemberTol) throw ContractError("point lies inside the downward closure");
    return sep;
}

std::optional<Vec> mixture_weights(const std::vector<Vec>& X, const Vec& r) {
    check_dims(X, r);
    if (X.empty()) return std::nullopt;
    const std::size_t m = X.size(), n = r.size();
    Vec scale(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        double lo = X[0][k], hi = X[0][k];
        for (const auto& x : X) {
            lo = std::min(lo, x[k]);
            hi = std::max(hi, x[k]);
        }
        if (hi - lo > 1e-12) scale[k] = hi - lo;
    }
    // variables: p_1..p_m >= 0, s free
    LpProblem lp;
    lp.objective.assign(m + 1, 0.0);
    lp.objective[m] = 1.0;
    lp.nonneg.assign(m + 1, true);
    lp.nonneg[m] = false;
    Vec sum(m + 1, 1.0);
    sum[m] = 0.0;
    lp.constraints.push_back({sum, Relation::Equal, 1.0});
    for (std::size_t k = 0; k < n; ++k) {
        Vec row(m + 1);
        for (std::size_t i = 0; i < m; ++i) row[i] = X[i][k] / scale[k];
        row[m] = -1.0;
        lp.constraints.push_back({row, Relation::GreaterEq, r[k] / scale[k]});
    }
    LpResult res = solve_lp(lp);
    if (res.status != LpStatus::Optimal) return std::nullopt;
    Vec p(res.x.begin(), res.x.begin() + static_cast<long>(m));
    double total = 0.0;
    for (double& v : p) {
        v = std::max(v, 0.0);
        total += v;
    }
    for (double& v : p) v /= total;
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += p[i] * X[i][k];
        if (acc < r[k] - kMemberTol) return std::nullopt;
    }
    return p;
}

std::optional<double> max_first_coordinate(const std::vector<Vec>& X, const Vec& r) {
    check_dims(X, r);
    if (X.empty()) return std::nullopt;
    const std::size_t m = X.size(), n = r.size();
    LpProblem lp;
    lp.objective.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) lp.objective[i] = X[i][0];
    lp.constraints.push_back({Vec(m, 1.0), Relation::Equal, 1.0});
    for (std::size_t k = 1; k < n; ++k) {
        Vec row(m);
        for (std::size_t i = 0; i < m; ++i) row[i] = X[i][k];
        lp.constraints.push_back({row, Relation::GreaterEq, r[k] - kMemberTol});
    }
    LpResult res = solve_lp(lp);
    if (res.status != LpStatus::Optimal) return std::nullopt;
    return res.objective;
}

std::vector<Vec> pareto_frontier_2d(const std::vector<Vec>& X) {
    for (const auto& x : X) {
        if (x.size() != 2) throw ContractError("pareto_frontier_2d needs two-dimensional points");
    }
    std::vector<Vec> pts = X;
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] != b[0] ? a[0] > b[0] : a[1] > b[1];
    });
    std::vector<Vec> maximal;
    double best_y = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        if (p[1] > best_y + 1e-12) {
            maximal.push_back(p);
            best_y = p[1];
        }
    }
    std::reverse(maximal.begin(), maximal.end());

    std::vector<Vec> hull;
    for (const auto& p : maximal) {
        while (hull.size() >= 2) {
            const Vec& a = hull[hull.size() - 2];
            const Vec& b = hull.back();
            const double scale = std::max({1.0, std::fabs(p[0] - a[0]), std::fabs(p[1] - a[1])});
            if (cross(a, b, p) >= -1e-12 * scale * scale) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    return hull;
}

double distance_to_dwc_2d(const std::vector<Vec>& X, const Vec& p) {
    if (X.empty()) throw ContractError("distance to the closure of an empty set");
    if (p.size() != 2) throw ContractError("distance_to_dwc_2d needs a two-dimensional point");
    const std::vector<Vec> v = pareto_frontier_2d(X);
    const Vec& first = v.front();
    const Vec& last = v.back();

    auto height = [&](double x) {
        if (x <= first[0]) return first[1];
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            if (x <= v[i + 1][0]) {
                const double t = (x - v[i][0]) / (v[i + 1][0] - v[i][0]);
                return v[i][1] + t * (v[i + 1][1] - v[i][1]);
            }
        }
        return -std::numeric_limits<double>::infinity();
    };
    if (p[0] <= last[0] && p[1] <= height(p[0])) return 0.0;

    double best = std::numeric_limits<double>::infinity();
    // horizontal ray to the left of the first vertex
    if (p[0] <= first[0]) best = std::min(best, std::fabs(p[1] - first[1]));
    else best = std::min(best, std::hypot(p[0] - first[0], p[1] - first[1]));
    // vertical ray below the last vertex
    if (p[1] <= last[1]) best = std::min(best, std::fabs(p[0] - last[0]));
    else best = std::min(best, std::hypot(p[0] - last[0], p[1] - last[1]));
    for (std::size_t i = 0; i + 1 < v.size(); ++i) best = std::min(best, segment_distance(p, v[i], v[i + 1]));
    return best;
}

}  // namespace imdp
