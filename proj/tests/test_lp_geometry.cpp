#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>

#include "imdp/geometry.hpp"
#include "imdp/lp.hpp"
#include "imdp/model.hpp"

using namespace imdp;

namespace {

LpConstraint le(Vec c, double rhs) { return {std::move(c), Relation::LessEq, rhs}; }
LpConstraint ge(Vec c, double rhs) { return {std::move(c), Relation::GreaterEq, rhs}; }
LpConstraint eq(Vec c, double rhs) { return {std::move(c), Relation::Equal, rhs}; }

/// Exhaustive membership in the downward closure of the convex hull for planar sets:
/// grid search over convex combinations of pairs (the closure is generated by segments in 2D).
bool planar_member(const std::vector<Vec>& X, const Vec& r) {
    for (const auto& a : X)
        for (const auto& b : X)
            for (int k = 0; k <= 2000; ++k) {
                const double t = k / 2000.0;
                if (t * a[0] + (1 - t) * b[0] >= r[0] - 1e-9 && t * a[1] + (1 - t) * b[1] >= r[1] - 1e-9) return true;
            }
    return false;
}

}  // namespace

TEST(Simplex, BoundedOptimum) {
    LpProblem lp{{1.0}, {le({1.0}, 1.0)}, {}};
    const auto r = solve_lp(lp);
    ASSERT_EQ(r.status, LpStatus::Optimal);
    EXPECT_NEAR(r.x[0], 1.0, 1e-12);
}

TEST(Simplex, Unbounded) {
    LpProblem lp{{1.0}, {ge({1.0}, 0.0)}, {}};
    EXPECT_EQ(solve_lp(lp).status, LpStatus::Unbounded);
}

TEST(Simplex, Infeasible) {
    LpProblem lp{{0.0}, {le({1.0}, -1.0)}, {}};
    EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
}

TEST(Simplex, FreeVariablesAndEqualities) {
    // max -x - y s.t. x + y = 1, x - y >= 3, y free -> x = 2, y = -1
    LpProblem lp{{-1.0, -1.0}, {eq({1.0, 1.0}, 1.0), ge({1.0, -1.0}, 3.0)}, {true, false}};
    const auto r = solve_lp(lp);
    ASSERT_EQ(r.status, LpStatus::Optimal);
    EXPECT_NEAR(r.objective, -1.0, 1e-12);
    EXPECT_GE(r.x[0] - r.x[1], 3.0 - 1e-9);
}

TEST(Simplex, DimensionMismatchThrows) {
    LpProblem lp{{1.0, 1.0}, {le({1.0}, 1.0)}, {}};
    EXPECT_THROW(solve_lp(lp), ContractError);
}

/// Random two-variable LPs against vertex enumeration of the constraint lines.
TEST(Simplex, MatchesPlanarVertexEnumeration) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        LpProblem lp;
        lp.objective = {u(rng), u(rng)};
        std::vector<std::array<double, 3>> lines = {{1, 0, 5}, {0, 1, 5}};  // box x, y <= 5
        for (int k = 0; k < 4; ++k) lines.push_back({u(rng), u(rng), 1.0 + u(rng)});
        for (const auto& l : lines) lp.constraints.push_back(le({l[0], l[1]}, l[2]));
        // candidate vertices: pairwise intersections including the axes
        lines.push_back({-1, 0, 0});
        lines.push_back({0, -1, 0});
        double best = -1e300;
        for (std::size_t i = 0; i < lines.size(); ++i)
            for (std::size_t j = i + 1; j < lines.size(); ++j) {
                const double det = lines[i][0] * lines[j][1] - lines[i][1] * lines[j][0];
                if (std::fabs(det) < 1e-12) continue;
                const double x = (lines[i][2] * lines[j][1] - lines[i][1] * lines[j][2]) / det;
                const double y = (lines[i][0] * lines[j][2] - lines[i][2] * lines[j][0]) / det;
                bool ok = true;
                for (const auto& l : lines) ok = ok && l[0] * x + l[1] * y <= l[2] + 1e-9;
                if (ok) best = std::max(best, lp.objective[0] * x + lp.objective[1] * y);
            }
        const auto r = solve_lp(lp);
        if (best == -1e300) {
            EXPECT_EQ(r.status, LpStatus::Infeasible);
        } else {
            ASSERT_EQ(r.status, LpStatus::Optimal);
            EXPECT_NEAR(r.objective, best, 1e-8);
        }
    }
}

TEST(DownwardClosure, Examples) {
    const std::vector<Vec> X{{1.0 / 3, 3.0}, {0.4, 1.0}};
    EXPECT_TRUE(in_downward_closure(X, {0.35, 2.0}));
    EXPECT_FALSE(in_downward_closure({{1.0 / 3, 3.0}}, {0.4, 1.0}));
    EXPECT_FALSE(in_downward_closure({}, {0.0, 0.0}));
}

TEST(DownwardClosure, DimensionMismatchThrows) {
    EXPECT_THROW(in_downward_closure({{1.0, 2.0}}, {1.0}), ContractError);
}

TEST(DownwardClosure, MatchesPlanarGridSearch) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec> X(1 + rng() % 4);
        for (auto& x : X) x = {u(rng), u(rng)};
        const Vec r{u(rng), u(rng)};
        const bool lp = in_downward_closure(X, r);
        // skip points within grid resolution of the boundary
        const auto sep = max_margin_weight(X, r);
        if (std::fabs(sep.margin) < 1e-3) continue;
        EXPECT_EQ(lp, planar_member(X, r)) << "trial " << trial;
    }
}

TEST(Separation, Examples) {
    auto s = max_margin_weight({{1.0 / 3, 3.0}}, {0.4, 1.0});
    EXPECT_NEAR(s.w[0], 1.0, 1e-12);
    EXPECT_NEAR(s.w[1], 0.0, 1e-12);
    EXPECT_NEAR(s.margin, 1.0 / 15, 1e-12);

    s = max_margin_weight({}, {0.0, 0.0});
    EXPECT_EQ(s.w, (Vec{0.5, 0.5}));

    s = max_margin_weight({{0.0, 1.0}, {1.0, 0.0}}, {1.0, 1.0});
    EXPECT_NEAR(s.w[0], 0.5, 1e-12);
    EXPECT_NEAR(s.margin, 0.5, 1e-12);
}

TEST(Separation, PositiveCoordinateFloor) {
    const auto s = max_margin_weight({{1.0 / 3, 3.0}}, {0.3, 4.0}, 0);
    EXPECT_GE(s.w[0], kPositiveWeightFloor * (1 - 1e-9));
    EXPECT_NEAR(s.w[1], 1.0 - s.w[0], 1e-12);
}

TEST(Separation, InsideClosureThrows) {
    EXPECT_THROW(separating_weight({{1.0, 1.0}}, {0.5, 0.5}), ContractError);
}

/// The weight lies in the simplex and separates r from X exactly when r is outside.
TEST(Separation, RandomInstances) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 3;
        std::vector<Vec> X(1 + rng() % 5, Vec(n));
        for (auto& x : X)
            for (double& v : x) v = u(rng);
        Vec r(n);
        for (double& v : r) v = u(rng);
        const auto s = max_margin_weight(X, r);
        double total = 0.0;
        for (double v : s.w) {
            EXPECT_GE(v, 0.0);
            total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        for (const auto& x : X) EXPECT_GE(dot(s.w, r) - dot(s.w, x), s.margin - 1e-12);
        if (std::fabs(s.margin) > 1e-9) EXPECT_EQ(s.margin > 0.0, !in_downward_closure(X, r));
    }
}

/// Thresholds a hair outside a facet still get the facet normal, with and without the floor.
TEST(Separation, NearFacetThresholds) {
    const std::vector<Vec> X{{3.0, 1.0 / 3}, {1.0, 0.4}};
    for (double eps : {0.0, 3e-9, 3e-8, 1e-7, 1e-5}) {
        for (auto floor : {std::optional<std::size_t>{}, std::optional<std::size_t>{0}}) {
            const auto s = max_margin_weight(X, {2.2 + eps, 0.36}, floor);
            EXPECT_NEAR(s.w[0], 1.0 / 31, 1e-9) << eps;
            EXPECT_NEAR(s.margin, eps / 31, 1e-12) << eps;
        }
    }
}

TEST(Mixture, Examples) {
    const std::vector<Vec> X{{1.0 / 3, 3.0}, {0.4, 1.0}};
    const auto p = mixture_weights(X, {0.35, 2.0});
    ASSERT_TRUE(p);
    EXPECT_GE((*p)[0], 0.5 - 1e-9);
    EXPECT_LE((*p)[0], 0.75 + 1e-9);
    EXPECT_NEAR((*p)[0], 0.625, 1e-9);

    const auto single = mixture_weights({{1.0, 2.0}}, {0.5, 2.0});
    ASSERT_TRUE(single);
    EXPECT_EQ(*single, Vec{1.0});
    EXPECT_FALSE(mixture_weights({{0.0, 0.0}}, {1.0, 1.0}));
}

TEST(MaxFirstCoordinate, RunningExampleCurve) {
    const std::vector<Vec> X{{1.0 / 3, 3.0}, {0.4, 1.0}};
    EXPECT_NEAR(*max_first_coordinate(X, {0.0, 3.0}), 1.0 / 3, 1e-9);
    EXPECT_NEAR(*max_first_coordinate(X, {0.0, 1.0}), 0.4, 1e-9);
    EXPECT_NEAR(*max_first_coordinate(X, {0.0, 2.0}), 1.0 / 3 + 0.5 / 15, 1e-9);
    EXPECT_FALSE(max_first_coordinate(X, {0.0, 3.5}));
}

TEST(Frontier, Examples) {
    auto f = pareto_frontier_2d({{1.0 / 3, 3.0}, {0.4, 1.0}});
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0], (Vec{1.0 / 3, 3.0}));
    EXPECT_EQ(f[1], (Vec{0.4, 1.0}));

    f = pareto_frontier_2d({{0.0, 0.0}, {1.0, 1.0}});
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0], (Vec{1.0, 1.0}));

    f = pareto_frontier_2d({{0.0, 1.0}, {0.5, 0.4}, {1.0, 0.0}});
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0], (Vec{0.0, 1.0}));
    EXPECT_EQ(f[1], (Vec{1.0, 0.0}));
}

TEST(Frontier, StrictlyMonotoneAndCoversAllPoints) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec> X(1 + rng() % 8);
        for (auto& x : X) x = {u(rng), u(rng)};
        const auto f = pareto_frontier_2d(X);
        for (std::size_t i = 1; i < f.size(); ++i) {
            EXPECT_GT(f[i][0], f[i - 1][0]);
            EXPECT_LT(f[i][1], f[i - 1][1]);
        }
        for (const auto& x : X) EXPECT_TRUE(in_downward_closure(f, x));
    }
}

TEST(Distance, Examples) {
    EXPECT_EQ(distance_to_dwc_2d({{1.0, 1.0}}, {0.5, 0.5}), 0.0);
    EXPECT_NEAR(distance_to_dwc_2d({{0.0, 0.0}}, {3.0, 4.0}), 5.0, 1e-12);
    EXPECT_NEAR(distance_to_dwc_2d({{0.0, 1.0}, {1.0, 0.0}}, {1.0, 1.0}), std::sqrt(2.0) / 2, 1e-12);
    EXPECT_NEAR(distance_to_dwc_2d({{0.0, 1.0}}, {-5.0, 3.0}), 2.0, 1e-12);
}

TEST(PointSet, MergesEqualPointsAndKeepsWeights) {
    PointSet ps;
    EXPECT_EQ(ps.add({1.0, 2.0}, 0, {1.0, 0.0}), 0u);
    EXPECT_EQ(ps.add({3.0, 0.0}, 1, {0.0, 1.0}), 1u);
    EXPECT_EQ(ps.add({1.0, 2.0}, 2, {0.5, 0.5}), 0u);
    EXPECT_EQ(ps.size(), 2u);
    EXPECT_EQ(ps.weights[0].size(), 2u);
    EXPECT_EQ(ps.tags[0], 0);
    EXPECT_THROW(ps.add({1.0}, 3, {1.0}), ContractError);
}
