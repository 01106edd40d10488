#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "imdp/query.hpp"
#include "imdp/vi.hpp"

using namespace imdp;

namespace {

bool mentions(const std::vector<std::string>& notes, const std::string& text) {
    return std::any_of(notes.begin(), notes.end(), [&](const std::string& n) { return n.find(text) != std::string::npos; });
}

/// Robust maximal probability of reaching `target` within k steps, computed on the original model.
double robust_reach(const Imdp& m, const std::set<int>& target, int k) {
    std::vector<double> v(m.num_states(), 0.0);
    for (int s : target) v[s] = 1.0;
    for (int j = 0; j < k; ++j) {
        std::vector<double> nv(m.num_states(), 0.0);
        for (std::size_t s = 0; s < m.num_states(); ++s) {
            if (target.count(static_cast<int>(s))) {
                nv[s] = 1.0;
                continue;
            }
            double best = 0.0;
            for (const auto& row : m.rows[s]) best = std::max(best, robust_extremum(row, v, Direction::Min).value);
            nv[s] = best;
        }
        v = std::move(nv);
    }
    return v[m.initial];
}

}  // namespace

TEST(BasicForm, RunningExampleProduct) {
    const Imdp m = fixtures::running_example();
    const BasicQuery b = to_basic_form(m, fixtures::running_synth(1.0 / 3, 0.25));
    std::set<std::string> states(b.model.states.begin(), b.model.states.end());
    // (u,{1}) needs a target visit before u, which the model does not allow
    EXPECT_EQ(states, (std::set<std::string>{"(s,{})", "(t,{})", "(u,{})", "(t,{1})"}));
    EXPECT_EQ(b.structures, (std::vector<std::string>{"reach:1", "r"}));
    EXPECT_EQ(b.bounds, (std::vector<int>{2, 1}));
    EXPECT_EQ(b.thresholds, (Vec{1.0 / 3, 0.25}));
    EXPECT_EQ(b.negated, (std::vector<bool>{false, false}));
    EXPECT_TRUE(validate(b.model).empty());
    // the reach reward is paid once, when leaving the freshly reached target copy
    const int t0 = b.model.state_index("(t,{})"), t1 = b.model.state_index("(t,{1})");
    EXPECT_EQ(b.model.reward("reach:1", t0, 0), 1.0);
    EXPECT_EQ(b.model.reward("reach:1", t1, 0), 0.0);
    const int s = b.model.state_index("(s,{})");
    EXPECT_EQ(b.model.reward("r", s, b.model.choice_of(s, b.model.action_index("a"))), 3.0);
    EXPECT_EQ(b.back_map[t0], (std::pair<int, std::uint32_t>{m.state_index("t"), 0u}));
    EXPECT_EQ(b.back_map[t1], (std::pair<int, std::uint32_t>{m.state_index("t"), 1u}));
}

TEST(BasicForm, NoReachObjectivesKeepsModel) {
    const Imdp m = fixtures::running_example();
    Query q;
    q.objectives = {fixtures::reward("r", Op::Ge, 1.0, 1)};
    const BasicQuery b = to_basic_form(m, q);
    EXPECT_EQ(b.model.states, m.states);
    EXPECT_EQ(b.model.initial, m.initial);
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        EXPECT_EQ(b.back_map[s].first, static_cast<int>(s));
        EXPECT_EQ(b.back_map[s].second, 0u);
        EXPECT_EQ(b.model.enabled[s], m.enabled[s]);
    }
    EXPECT_EQ(b.model.reward("r").values, m.reward("r").values);
}

TEST(BasicForm, UpperBoundIsNegated) {
    const Imdp m = fixtures::running_example();
    Query q;
    q.objectives = {fixtures::reward("r", Op::Le, 5.0, 1)};
    const BasicQuery b = to_basic_form(m, q);
    EXPECT_EQ(b.structures[0], "neg:r");
    EXPECT_EQ(b.thresholds[0], -5.0);
    EXPECT_TRUE(b.negated[0]);
    const int s = m.state_index("s");
    EXPECT_EQ(b.model.reward("neg:r", s, fixtures::choice(m, "s", "a")), -3.0);
}

TEST(BasicForm, ModeDirections) {
    const Imdp m = fixtures::running_example();
    Query q = fixtures::running_pareto();
    q.directions = {Direction::Max, Direction::Min};
    const BasicQuery b = to_basic_form(m, q);
    EXPECT_EQ(b.negated, (std::vector<bool>{false, true}));

    Query qq = fixtures::running_synth(0.3, 0.0);
    qq.mode = Mode::Qnt;
    qq.qnt_index = 1;
    qq.qnt_direction = Direction::Min;
    EXPECT_EQ(effective_op(qq, 1), Op::Le);
    EXPECT_EQ(effective_op(qq, 0), Op::Ge);
}

TEST(BasicForm, InvalidQueries) {
    const Imdp m = fixtures::running_example();
    Query q;
    EXPECT_THROW(to_basic_form(m, q), InputError);
    q.objectives = {fixtures::reach({"z"}, Op::Ge, 0.5, 1)};
    EXPECT_THROW(to_basic_form(m, q), InputError);
    q.objectives = {fixtures::reach({"t"}, Op::Ge, 1.5, 1)};
    EXPECT_THROW(to_basic_form(m, q), InputError);
    q.objectives = {fixtures::reward("nope", Op::Ge, 0.0, 1)};
    EXPECT_THROW(to_basic_form(m, q), InputError);
    Query p = fixtures::running_pareto();
    p.objectives.push_back(fixtures::reward("r", Op::Ge, 0.0, 1));
    EXPECT_THROW(to_basic_form(m, p), InputError);
}

TEST(BasicForm, MoveToFront) {
    const Imdp m = fixtures::running_example();
    BasicQuery b = to_basic_form(m, fixtures::running_synth(0.2, 0.5));
    b = move_to_front(b, 1);
    EXPECT_EQ(b.structures, (std::vector<std::string>{"r", "reach:1"}));
    EXPECT_EQ(b.bounds, (std::vector<int>{1, 2}));
    EXPECT_EQ(b.thresholds, (Vec{0.5, 0.2}));
    EXPECT_THROW(move_to_front(b, 2), ContractError);
}

/// Product values of a single reachability objective equal a direct robust DP on the original model.
TEST(BasicForm, ReachMatchesDirectDynamicProgram) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        fixtures::RandomModelSpec spec;
        spec.states = 2 + static_cast<int>(rng() % 4);
        spec.structures = 0;
        const Imdp m = fixtures::random_model(rng, spec);
        std::set<int> target;
        std::vector<std::string> names;
        for (int s = 0; s < spec.states; ++s) {
            if (rng() % 3 == 0) {
                target.insert(s);
                names.push_back(m.states[s]);
            }
        }
        if (names.empty()) continue;
        const int k = static_cast<int>(rng() % 5);
        Query q;
        q.objectives = {fixtures::reach(names, Op::Ge, 0.0, k)};
        const BasicQuery b = to_basic_form(m, q);
        ViOptions o;
        o.epsilon = 1e-12;
        const double vi = weighted_robust_vi(b, {1.0}, o).g[0];
        EXPECT_NEAR(vi, robust_reach(m, target, k), 1e-12) << "trial " << trial;
    }
}

/// Target bitmasks only grow along transitions.
TEST(BasicForm, BitmasksAreMonotone) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        fixtures::RandomModelSpec spec;
        spec.states = 3 + static_cast<int>(rng() % 3);
        const Imdp m = fixtures::random_model(rng, spec);
        Query q;
        q.objectives = {fixtures::reach({m.states[1]}, Op::Ge, 0.0, 2), fixtures::reach({m.states[2]}, Op::Ge, 0.0, kInf),
                        fixtures::reward("r0", Op::Ge, 0.0, 3)};
        const BasicQuery b = to_basic_form(m, q);
        EXPECT_TRUE(validate(b.model).empty());
        for (std::size_t ps = 0; ps < b.model.num_states(); ++ps) {
            const std::uint32_t v = b.back_map[ps].second;
            for (const auto& row : b.model.rows[ps])
                for (const auto& e : row.entries) EXPECT_EQ(b.back_map[e.target].second & v, v);
        }
    }
}

TEST(Assumptions, RunningExampleIsClean) {
    const Imdp m = fixtures::running_example();
    EXPECT_TRUE(check_assumptions(m, fixtures::running_synth(1.0 / 3, 0.25)).empty());
}

TEST(Assumptions, PositiveRewardInsideSec) {
    ModelBuilder b;
    for (const char* s : {"s", "t", "u"}) b.state(s);
    b.set_initial("s");
    b.transition("s", "a", "t", 0.5, 0.5);
    b.transition("s", "a", "u", 0.5, 0.5);
    b.transition("t", "a", "t", 1.0, 1.0);
    b.transition("u", "b", "u", 1.0, 1.0);
    b.reward("r", "t", "a", 1.0);
    const Imdp m = b.build();
    Query q;
    q.objectives = {fixtures::reward("r", Op::Ge, 1.0, kInf)};
    EXPECT_TRUE(mentions(check_assumptions(m, q), "positive reward inside SEC ({t},a)"));
    q.objectives[0].step_bound = 3;
    EXPECT_TRUE(check_assumptions(m, q).empty());
}

TEST(Assumptions, MixedDirectionsAndNegativeRewards) {
    ModelBuilder b;
    b.state("s");
    b.state("t");
    b.set_initial("s");
    b.transition("s", "a", "t", 1.0, 1.0);
    b.transition("t", "a", "t", 1.0, 1.0);
    b.reward("r", "s", "a", 1.0);
    b.reward("c", "s", "a", -1.0);
    const Imdp m = b.build();
    Query q;
    q.objectives = {fixtures::reward("r", Op::Ge, 0.0, kInf), fixtures::reward("r", Op::Le, 2.0, kInf)};
    EXPECT_TRUE(mentions(check_assumptions(m, q), "mixed infinite-horizon directions"));
    q.objectives = {fixtures::reward("c", Op::Ge, -2.0, 2)};
    EXPECT_TRUE(mentions(check_assumptions(m, q), "negative reward in 'c'"));
}

TEST(Prune, RemovesRewardLoopAndDeadState) {
    ModelBuilder b;
    for (const char* s : {"s", "t", "u"}) b.state(s);
    b.set_initial("s");
    b.transition("s", "a", "t", 1.0, 1.0);
    b.transition("s", "b", "u", 1.0, 1.0);
    b.transition("t", "a", "t", 1.0, 1.0);
    b.transition("u", "a", "u", 1.0, 1.0);
    b.reward("r", "t", "a", 1.0);
    b.reward("r", "s", "b", 1.0);
    const Imdp m = b.build();
    Query q;
    q.objectives = {fixtures::reward("r", Op::Ge, 1.0, kInf)};
    const Imdp p = prune_reward_divergent(m, q);
    EXPECT_EQ(p.num_states(), 2u);
    EXPECT_THROW(p.state_index("t"), InputError);
    EXPECT_EQ(p.num_choices(p.state_index("s")), 1u);
    EXPECT_TRUE(validate(p).empty());
    EXPECT_TRUE(check_assumptions(p, q).empty());
}

TEST(Prune, UnchangedWithoutOffenders) {
    const Imdp m = fixtures::running_example();
    Query q;
    q.objectives = {fixtures::reward("r", Op::Ge, 1.0, kInf)};
    const Imdp p = prune_reward_divergent(m, q);
    EXPECT_EQ(p.states, m.states);
    EXPECT_EQ(p.enabled, m.enabled);
}

TEST(Prune, InitialStateRemovedIsUnachievable) {
    ModelBuilder b;
    b.state("s");
    b.set_initial("s");
    b.transition("s", "a", "s", 1.0, 1.0);
    b.reward("r", "s", "a", 1.0);
    Query q;
    q.objectives = {fixtures::reward("r", Op::Ge, 1.0, kInf)};
    EXPECT_THROW(prune_reward_divergent(b.build(), q), UnachievableError);
}
