#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "imdp/robust.hpp"

using namespace imdp;

namespace {

IntervalRow row(std::initializer_list<Entry> es) { return IntervalRow{es}; }

double optimum_by_vertices(const IntervalRow& r, const std::vector<double>& v, Direction dir) {
    double best = dir == Direction::Min ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
    for (const auto& p : vertex_enumerate(r)) {
        double val = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) val += p[i] * v[r.entries[i].target];
        best = dir == Direction::Min ? std::min(best, val) : std::max(best, val);
    }
    return best;
}

}  // namespace

TEST(RobustExtremum, RunningExampleMinimum) {
    const auto r = row({{0, 1.0 / 3, 2.0 / 3}, {1, 0.1, 1.0}});
    const auto e = robust_extremum(r, {1.0, 0.0}, Direction::Min);
    EXPECT_NEAR(e.value, 1.0 / 3, 1e-15);
    EXPECT_NEAR(e.witness[0], 1.0 / 3, 1e-15);
    EXPECT_NEAR(e.witness[1], 2.0 / 3, 1e-15);
}

TEST(RobustExtremum, GreedyMaximum) {
    const auto r = row({{0, 0.4, 0.6}, {1, 0.25, 2.0 / 3}});
    const auto e = robust_extremum(r, {1.0, 0.0}, Direction::Max);
    EXPECT_NEAR(e.value, 0.6, 1e-15);
    EXPECT_NEAR(e.witness[0], 0.6, 1e-15);
    EXPECT_NEAR(e.witness[1], 0.4, 1e-15);
    EXPECT_NEAR(optimum_by_vertices(r, {1.0, 0.0}, Direction::Max), 0.6, 1e-15);
}

TEST(RobustExtremum, PointIntervals) {
    const auto r = row({{0, 0.3, 0.3}, {1, 0.7, 0.7}});
    for (auto dir : {Direction::Min, Direction::Max}) {
        EXPECT_NEAR(robust_extremum(r, {5.0, -2.0}, dir).value, 0.3 * 5.0 - 0.7 * 2.0, 1e-15);
    }
}

TEST(RobustExtremum, InfeasibleRowThrows) {
    EXPECT_THROW(robust_extremum(row({{0, 0.1, 0.2}, {1, 0.1, 0.2}}), {0.0, 0.0}, Direction::Min), ContractError);
    EXPECT_THROW(robust_extremum(row({{0, 0.7, 0.9}, {1, 0.7, 0.9}}), {0.0, 0.0}, Direction::Min), ContractError);
}

TEST(RobustExtremum, TiesGoToLowerIndex) {
    const auto r = row({{1, 0.2, 0.8}, {0, 0.2, 0.8}});
    const auto e = robust_extremum(r, {0.0, 0.0}, Direction::Min);
    EXPECT_NEAR(e.witness[1], 0.8, 1e-15);  // state 0 is filled first
    EXPECT_NEAR(e.witness[0], 0.2, 1e-15);
}

TEST(RobustExtremum, SecondaryKeyBreaksTies) {
    const auto r = row({{0, 0.2, 0.8}, {1, 0.2, 0.8}});
    Distribution w;
    const std::vector<double> tie{1.0, 0.0};
    const double v = robust_extremum(r, {0.0, 0.0}, Direction::Min, w, &tie);
    EXPECT_EQ(v, 0.0);
    EXPECT_NEAR(w[1], 0.8, 1e-15);
    EXPECT_NEAR(w[0], 0.2, 1e-15);
}

TEST(VertexEnumerate, TwoTargets) {
    auto vs = vertex_enumerate(row({{0, 1.0 / 3, 2.0 / 3}, {1, 0.1, 1.0}}));
    std::sort(vs.begin(), vs.end());
    ASSERT_EQ(vs.size(), 2u);
    EXPECT_NEAR(vs[0][0], 1.0 / 3, 1e-15);
    EXPECT_NEAR(vs[0][1], 2.0 / 3, 1e-15);
    EXPECT_NEAR(vs[1][0], 2.0 / 3, 1e-15);
    EXPECT_NEAR(vs[1][1], 1.0 / 3, 1e-15);
}

TEST(VertexEnumerate, PointRowHasOneVertex) {
    EXPECT_EQ(vertex_enumerate(row({{0, 0.3, 0.3}, {1, 0.7, 0.7}})).size(), 1u);
}

TEST(VertexEnumerate, SymmetricThreeTargets) {
    const auto vs = vertex_enumerate(row({{0, 0.2, 0.5}, {1, 0.2, 0.5}, {2, 0.2, 0.5}}));
    ASSERT_EQ(vs.size(), 6u);
    for (auto v : vs) {
        std::sort(v.begin(), v.end());
        EXPECT_NEAR(v[0], 0.2, 1e-12);
        EXPECT_NEAR(v[1], 0.3, 1e-12);
        EXPECT_NEAR(v[2], 0.5, 1e-12);
    }
}

TEST(VertexEnumerate, TooManyTargetsThrows) {
    IntervalRow r;
    for (int i = 0; i < 9; ++i) r.entries.push_back({i, 0.01, 0.5});
    EXPECT_THROW(vertex_enumerate(r), ContractError);
}

TEST(IsFeasible, BoundsAndSum) {
    const auto r = row({{0, 0.2, 0.5}, {1, 0.5, 0.8}});
    EXPECT_TRUE(is_feasible(r, {0.3, 0.7}));
    EXPECT_FALSE(is_feasible(r, {0.1, 0.9}));
    EXPECT_FALSE(is_feasible(r, {0.3, 0.6}));
}

/// Greedy optimum equals the best vertex, and the witness is feasible, in both directions.
TEST(RobustExtremum, MatchesVertexEnumerationOnRandomRows) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 3000; ++trial) {
        const IntervalRow r = fixtures::random_row(rng, 6, 5, 0.4);
        std::vector<double> v(6);
        for (double& x : v) x = (trial % 4 == 0) ? std::round(u(rng)) : u(rng);
        for (auto dir : {Direction::Min, Direction::Max}) {
            const auto e = robust_extremum(r, v, dir);
            ASSERT_TRUE(is_feasible(r, e.witness, 1e-9));
            ASSERT_NEAR(e.value, optimum_by_vertices(r, v, dir), 1e-9);
        }
    }
}

/// min over the row of v equals -max over the row of -v.
TEST(RobustExtremum, DualityOfDirections) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const IntervalRow r = fixtures::random_row(rng, 5, 4);
        std::vector<double> v(5), neg(5);
        for (int i = 0; i < 5; ++i) neg[i] = -(v[i] = u(rng));
        EXPECT_NEAR(robust_extremum(r, v, Direction::Min).value, -robust_extremum(r, neg, Direction::Max).value, 1e-12);
    }
}
