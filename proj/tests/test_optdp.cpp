#include "test_util.hpp"

#include "rashomon/optdp.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rashomon;

namespace {

BinaryDataset xor_data()
{
    return BinaryDataset::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, LabelVector::classification({0, 1, 1, 0}));
}

/// Loss of `t` over the view's samples plus lambda per branching node.
double view_value(const Tree& t, const DataView& v, const ObjectiveConfig& cfg)
{
    const auto& d = v.dataset();
    double loss = 0;
    v.members().for_each([&](std::size_t i) {
        const double p = t.predict(d, i);
        if (d.task() == Task::classification)
            loss += p != d.labels().classes[i] ? 1.0 / static_cast<double>(d.num_samples()) : 0.0;
        else
            loss += (p - d.labels().values[i]) * (p - d.labels().values[i]);
    });
    return loss + cfg.lambda * (t.num_leaves() - 1);
}

Bitset random_members(std::mt19937_64& rng, std::size_t n)
{
    Bitset m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, rng() % 3 != 0);
    return m;
}

} // namespace

TEST(Optimal, Xor)
{
    const auto d = xor_data();
    OptimalSolver s(d, ObjectiveConfig::classification(0.01));
    EXPECT_NEAR(total_cost(s.solve_root(2).value, 0.01), 0.04, 1e-12);
    // Every depth-1 tree misclassifies half of XOR; the brute-force optimum is the leaf.
    const double depth1 = oracle::scored_trees(d, 1, 0.01, false).front().cost;
    EXPECT_NEAR(depth1, 0.51, 1e-12);
    EXPECT_NEAR(total_cost(s.solve_root(1).value, 0.01), depth1, 1e-12);
    EXPECT_NEAR(evaluate_objective(s.solve_root(2).tree, d, s.config()), 0.04, 1e-12);
}

TEST(Optimal, PureViewAndDepthZero)
{
    const auto d = BinaryDataset::from_rows({{0, 1}, {1, 0}, {1, 1}}, LabelVector::classification({1, 1, 1}));
    OptimalSolver s(d, ObjectiveConfig::classification(0.01));
    for (int depth = 0; depth < 4; ++depth) {
        const auto r = s.solve_root(depth);
        EXPECT_EQ(r.value, 0.0);
        EXPECT_TRUE(r.tree.is_leaf());
    }
    const auto x = xor_data();
    OptimalSolver t(x, ObjectiveConfig::classification(0.0));
    EXPECT_TRUE(t.solve_root(0).tree.is_leaf());
}

TEST(Optimal, ConstantFeaturesGiveLeaf)
{
    const auto d = BinaryDataset::from_rows({{1, 0}, {1, 0}, {1, 0}}, LabelVector::classification({0, 1, 1}));
    EXPECT_TRUE(depth2_optimal(DataView::all(d), 2, ObjectiveConfig::classification(0.0)).tree.is_leaf());
}

TEST(Optimal, SingleFeatureDepthOne)
{
    const auto d = BinaryDataset::from_rows({{0}, {0}, {1}, {1}}, LabelVector::classification({0, 1, 1, 1}));
    const auto cfg = ObjectiveConfig::classification(0.1);
    // leaf: 1/4; split: 1/4 + λ
    EXPECT_TRUE(depth2_optimal(DataView::all(d), 1, cfg).tree.is_leaf());
    const auto cfg0 = ObjectiveConfig::classification(0.0);
    const auto r = depth2_optimal(DataView::all(d), 1, cfg0);
    EXPECT_NEAR(r.value, 0.25, 1e-15);
}

TEST(Optimal, FastPathMatchesGeneric)
{
    std::mt19937_64 rng(21);
    for (int it = 0; it < 200; ++it) {
        const bool reg = it % 4 == 3;
        const auto d = reg ? testutil::random_regression(rng(), 20 + rng() % 60, 5)
                           : testutil::random_dataset(rng(), 20 + rng() % 60, 5, 2 + it % 3);
        const auto cfg = ObjectiveConfig::for_task(d.task(), it % 2 ? 0.01 : 0.03);
        const DataView v(d, random_members(rng, d.num_samples()));
        OptimalSolver fast(d, cfg), generic(d, cfg, {}, {true, false});
        for (int depth = 1; depth <= 3; ++depth) {
            const auto a = fast.solve(v, depth), b = generic.solve(v, depth);
            ASSERT_NEAR(a.value, b.value, cfg.tolerance) << it << " depth " << depth;
            EXPECT_NEAR(view_value(a.tree, v, cfg), a.value, cfg.tolerance);
            if (depth <= 2) EXPECT_NEAR(depth2_optimal(v, depth, cfg).value, b.value, cfg.tolerance);
        }
    }
}

TEST(Optimal, CacheIsTransparent)
{
    std::mt19937_64 rng(22);
    for (int it = 0; it < 40; ++it) {
        const auto d = testutil::random_dataset(rng(), 50, 6);
        const auto cfg = ObjectiveConfig::classification(0.01);
        OptimalSolver cached(d, cfg), uncached(d, cfg, {}, {false, true});
        for (int depth = 0; depth <= 4; ++depth) {
            const auto a = cached.solve_root(depth), b = uncached.solve_root(depth);
            EXPECT_EQ(a.value, b.value);
            EXPECT_EQ(serialize_tree(a.tree), serialize_tree(b.tree));
        }
        EXPECT_GT(cached.cache_size(), 0u);
        EXPECT_EQ(uncached.cache_size(), 0u);
    }
}

TEST(Optimal, MonotoneInDepth)
{
    std::mt19937_64 rng(23);
    for (int it = 0; it < 40; ++it) {
        const auto d = testutil::random_dataset(rng(), 60, 6);
        OptimalSolver s(d, ObjectiveConfig::classification(0.005));
        double prev = kInfinity;
        for (int depth = 0; depth <= 4; ++depth) {
            const double v = s.solve_root(depth).value;
            EXPECT_LE(v, prev + 1e-12);
            prev = v;
        }
    }
}

TEST(Optimal, MatchesOracle)
{
    std::mt19937_64 rng(24);
    for (int it = 0; it < 60; ++it) {
        const bool reg = it % 3 == 2;
        const auto d = reg ? testutil::random_regression(rng(), 10 + rng() % 25, 4)
                           : testutil::random_dataset(rng(), 10 + rng() % 25, 4);
        const double lambda = it % 2 ? 0.01 : 0.05;
        const auto cfg = ObjectiveConfig::for_task(d.task(), lambda);
        OptimalSolver s(d, cfg);
        for (int depth = 0; depth <= 3; ++depth) {
            const auto best = oracle::scored_trees(d, depth, lambda, false).front().cost;
            EXPECT_NEAR(total_cost(s.solve_root(depth).value, lambda), best, cfg.tolerance);
        }
    }
}

TEST(Optimal, BoundExceeded)
{
    const auto d = xor_data();
    OptimalSolver s(d, ObjectiveConfig::classification(0.01));
    const auto r = s.solve(DataView::all(d), 2, 0.01);
    EXPECT_TRUE(r.bound_exceeded);
    EXPECT_TRUE(r.tree.is_leaf());
    // A bounded miss must not poison the exact answer.
    EXPECT_FALSE(s.solve(DataView::all(d), 2).bound_exceeded);
    EXPECT_NEAR(s.solve(DataView::all(d), 2).value, 0.03, 1e-12);
}

TEST(Optimal, AllowedFeatures)
{
    const auto d = xor_data();
    OptimalSolver s(d, ObjectiveConfig::classification(0.0), {true, false});
    EXPECT_NEAR(s.solve_root(2).value, 0.5, 1e-12);
}
