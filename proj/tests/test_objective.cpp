#include "rashomon/data.hpp"
#include "rashomon/objective.hpp"

#include <gtest/gtest.h>

using namespace rashomon;

namespace {

BinaryDataset eight_samples()
{
    // Samples 0..3 satisfy f0; among them 3 positives and 1 negative.
    std::vector<std::vector<std::uint8_t>> rows = {{1}, {1}, {1}, {1}, {0}, {0}, {0}, {0}};
    return BinaryDataset::from_rows(rows, LabelVector::classification({1, 1, 1, 0, 0, 0, 1, 1}));
}

} // namespace

TEST(LeafCost, MajorityLabel)
{
    const auto d = eight_samples();
    const auto c = leaf_cost(split(DataView::all(d), 0).second, ObjectiveConfig::classification(0.0));
    EXPECT_DOUBLE_EQ(c.value, 1.0 / 8);
    EXPECT_EQ(c.prediction, 1.0);
    EXPECT_EQ(c.optimal_labels, 0b10u);
}

TEST(LeafCost, TiesGoToLowestClass)
{
    const auto d = eight_samples();
    Bitset m(8);
    m.set(2);
    m.set(3);
    const auto c = leaf_cost(DataView(d, m), ObjectiveConfig::classification(0.0));
    EXPECT_EQ(c.prediction, 0.0);
    EXPECT_EQ(c.optimal_labels, 0b11u);
    EXPECT_DOUBLE_EQ(c.value, 1.0 / 8);
}

TEST(LeafCost, PureAndEmpty)
{
    const auto d = eight_samples();
    Bitset m(8);
    m.set(0);
    m.set(1);
    EXPECT_EQ(leaf_cost(DataView(d, m), ObjectiveConfig::classification(0.0)).value, 0.0);
    const auto e = leaf_cost(DataView(d, Bitset(8)), ObjectiveConfig::classification(0.0));
    EXPECT_EQ(e.value, 0.0);
    EXPECT_EQ(e.prediction, 0.0);
    EXPECT_TRUE(e.free);
}

TEST(LeafCost, RegressionMeanAndSse)
{
    const auto d = BinaryDataset::from_rows({{0}, {1}}, LabelVector::regression({1.0, 3.0}));
    const auto c = leaf_cost(DataView::all(d), ObjectiveConfig::regression(0.0));
    EXPECT_DOUBLE_EQ(c.prediction, 2.0);
    EXPECT_DOUBLE_EQ(c.value, 2.0);
    const auto e = leaf_cost(DataView(d, Bitset(2)), ObjectiveConfig::regression(0.0));
    EXPECT_EQ(e.value, 0.0);
    EXPECT_EQ(e.prediction, 0.0);
}

TEST(Combine, Additive)
{
    EXPECT_NEAR(combine(0.10, 0.10, 0.0), 0.20, 1e-15);
    EXPECT_NEAR(combine(0.10, 0.32, 0.0), 0.42, 1e-15);
    for (double a : {0.0, 0.3, 1.7}) EXPECT_DOUBLE_EQ(combine(a, 0.0, 0.05), a + 0.05);
}

TEST(TotalCost, LeafCountTimesLambda)
{
    EXPECT_NEAR(total_cost(0.125, 0.01), 0.135, 1e-15);
    EXPECT_NEAR(total_cost(combine(0.0, 0.1, 0.01), 0.01), 0.12, 1e-15);
    const double depth_two = combine(combine(0, 0, 0.01), combine(0, 0, 0.01), 0.01);
    EXPECT_NEAR(total_cost(depth_two, 0.01), 0.04, 1e-15);
}

TEST(RashomonBound, Multiplicative)
{
    EXPECT_NEAR(rashomon_bound(0.2, 0.1).theta, 0.22, 1e-15);
    EXPECT_EQ(rashomon_bound(0.37, 0.0).theta, 0.37);
    EXPECT_EQ(rashomon_bound(0.0, 5.0).theta, 0.0);
    EXPECT_THROW(rashomon_bound(0.2, -0.1), std::invalid_argument);
}

TEST(ValuesEqual, Tolerances)
{
    const auto c = ObjectiveConfig::classification(0.0);
    const auto r = ObjectiveConfig::regression(0.0);
    EXPECT_TRUE(values_equal(0.125, 0.125 + 1e-12, c));
    EXPECT_TRUE(values_equal(1.00003, 1.00009, r));
    EXPECT_FALSE(values_equal(0.10, 0.11, r));
    EXPECT_FALSE(values_equal(0.125, 0.125 + 1e-8, c));
}

TEST(Config, Validate)
{
    EXPECT_NO_THROW(ObjectiveConfig::classification(0.01).validate());
    EXPECT_THROW(ObjectiveConfig::classification(-0.01).validate(), std::invalid_argument);
}

TEST(TrivialPair, LabelSets)
{
    LeafCost a, b;
    a.optimal_labels = b.optimal_labels = 0b10;
    a.prediction = b.prediction = 1;
    EXPECT_TRUE(is_trivial_leaf_pair(a, b, Task::classification));
    // Left tied between 0 and 1, right positive: the left default 0 already differs.
    a.optimal_labels = 0b11;
    a.prediction = 0;
    EXPECT_FALSE(is_trivial_leaf_pair(a, b, Task::classification));
    auto [l, r] = resolve_leaf_pair(a, b, Task::classification);
    EXPECT_EQ(l, 0.0);
    EXPECT_EQ(r, 1.0);
    // Both tied: the right moves off the shared default.
    b.optimal_labels = 0b11;
    b.prediction = 0;
    std::tie(l, r) = resolve_leaf_pair(a, b, Task::classification);
    EXPECT_EQ(l, 0.0);
    EXPECT_EQ(r, 1.0);
}
