#include "test_util.hpp"

#include "rashomon/tree.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rashomon;

namespace {

Tree random_tree(std::mt19937_64& rng, int depth, int features)
{
    if (depth == 0 || rng() % 3 == 0) return Tree::leaf(static_cast<double>(rng() % 3));
    return Tree::split(static_cast<int>(rng() % features), random_tree(rng, depth - 1, features),
                       random_tree(rng, depth - 1, features));
}

} // namespace

TEST(Serialize, Examples)
{
    EXPECT_EQ(serialize_tree(Tree::leaf(1)), "{\"predict\":1}");
    EXPECT_EQ(serialize_tree(Tree::split(3, Tree::leaf(0), Tree::leaf(1))),
              "{\"feature\":3,\"left\":{\"predict\":0},\"right\":{\"predict\":1}}");
    EXPECT_EQ(serialize_tree(Tree::leaf(0.25)), "{\"predict\":0.25}");
}

TEST(Serialize, RoundTrip)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 500; ++i) {
        const Tree t = random_tree(rng, 4, 6);
        const Tree u = parse_tree(serialize_tree(t));
        EXPECT_TRUE(t == u);
        EXPECT_EQ(serialize_tree(u), serialize_tree(t));
    }
    const Tree r = Tree::split(0, Tree::leaf(0.1), Tree::leaf(-2.0 / 3.0));
    EXPECT_TRUE(parse_tree(serialize_tree(r)) == r);
}

TEST(Serialize, Malformed)
{
    EXPECT_THROW(parse_tree("{"), std::invalid_argument);
    EXPECT_THROW(parse_tree("[1]"), std::invalid_argument);
    EXPECT_THROW(parse_tree("{\"feature\":1,\"left\":{\"predict\":0}}"), std::invalid_argument);
}

TEST(Predict, LeafAndStump)
{
    const Tree leaf = Tree::leaf(1);
    EXPECT_EQ(leaf.predict(std::vector<std::uint8_t>{0, 1}), 1.0);
    const Tree stump = Tree::split(1, Tree::leaf(0), Tree::leaf(1));
    EXPECT_EQ(stump.predict(std::vector<std::uint8_t>{0, 1}), 1.0);
    EXPECT_EQ(stump.predict(std::vector<std::uint8_t>{1, 0}), 0.0);
    EXPECT_THROW(stump.predict(std::vector<std::uint8_t>{1}), std::invalid_argument);
}

TEST(Predict, MisclassificationMatchesRecount)
{
    std::mt19937_64 rng(5);
    const auto d = testutil::random_dataset(2, 60, 5);
    for (int i = 0; i < 100; ++i) {
        const Tree t = random_tree(rng, 3, 5);
        std::size_t wrong = 0;
        for (std::size_t s = 0; s < d.num_samples(); ++s)
            wrong += t.predict(d.row(s)) != d.labels().classes[s];
        EXPECT_EQ(count_misclassified(t, d), wrong);
        EXPECT_NEAR(evaluate_objective(t, d, ObjectiveConfig::classification(0.02)),
                    static_cast<double>(wrong) / 60 + 0.02 * t.num_leaves(), 1e-12);
    }
}

TEST(Shape, LeavesAndDepth)
{
    const Tree t = Tree::split(0, Tree::leaf(0), Tree::split(1, Tree::leaf(1), Tree::leaf(0)));
    EXPECT_EQ(t.num_leaves(), 3);
    EXPECT_EQ(t.depth(), 2);
    EXPECT_EQ(Tree::leaf(0).depth(), 0);
}

TEST(FormatNumber, Shortest)
{
    EXPECT_EQ(format_number(3.0), "3");
    EXPECT_EQ(format_number(-0.5), "-0.5");
    EXPECT_EQ(format_number(0.1 + 0.2), "0.30000000000000004");
}
