#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace rashomon;
using namespace testutil;

TEST(Enumerate, MatchesOracleSmoke)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto data = random_dataset(seed, 12 + seed % 20, 2 + seed % 4);
        for (int depth : {1, 2, 3}) {
            for (bool nt : {false, true}) {
                EnumerationConfig cfg;
                cfg.depth = depth;
                cfg.objective = ObjectiveConfig::classification(0.01);
                cfg.epsilon = 0.3;
                cfg.ignore_trivial_extensions = nt;
                RashomonEnumerator e(data, cfg);
                auto groups = e.run();
                auto got = list_all(groups);
                sort_like_oracle(got);
                const auto want = oracle::within(oracle::scored_trees(data, depth, 0.01, nt), e.theta());
                ASSERT_EQ(got.size(), want.size()) << "seed " << seed << " depth " << depth << " nt " << nt;
                for (std::size_t i = 0; i < got.size(); ++i) {
                    EXPECT_EQ(got[i].text, want[i].text);
                    EXPECT_NEAR(got[i].cost, want[i].cost, 1e-9);
                }
            }
        }
    }
}

namespace {

/// A sorted list that can be revealed gradually.
struct ListSource : MergeSource {
    std::vector<double> values;
    std::size_t visible = ~std::size_t{0};
    std::vector<std::size_t> reads;
    std::optional<double> value_at(std::size_t i) override
    {
        reads.push_back(i);
        if (i >= values.size() || i >= visible) return std::nullopt;
        return values[i];
    }
};

struct Drained {
    double value;
    std::uint32_t left, right;
};

std::vector<Drained> drain(LazyPairMerger& m, ListSource& l, ListSource& r, double ub = kInfinity)
{
    std::vector<Drained> out;
    for (;;) {
        const double v = m.next(l, r);
        if (v == kInfinity || v > ub) break;
        for (const auto& p : m.pop_equal(l, r, v)) out.push_back({v, p.left, p.right});
    }
    return out;
}

EnumerationConfig base_config(int depth, double lambda, double eps)
{
    EnumerationConfig cfg;
    cfg.depth = depth;
    cfg.objective = ObjectiveConfig::classification(lambda);
    cfg.epsilon = eps;
    return cfg;
}

struct Stream {
    std::vector<double> values;
    std::vector<std::string> counts;
    std::vector<std::string> trees;
    std::vector<std::set<std::string>> per_group;
};

Stream stream_of(const BinaryDataset& d, const EnumerationConfig& cfg)
{
    RashomonEnumerator e(d, cfg);
    Stream s;
    const auto groups = e.run();
    for (const auto& g : groups) {
        s.values.push_back(g.value);
        s.counts.push_back(g.count.str());
    }
    s.per_group.resize(groups.size());
    for (const auto& t : list_all(groups)) {
        s.trees.push_back(t.text);
        s.per_group[t.group].insert(t.text);
    }
    return s;
}

} // namespace

TEST(Merger, MergeStepExample)
{
    ListSource l, r;
    l.values = {0.10, 0.40};
    r.values = {0.10, 0.32};
    LazyPairMerger m(0.0, 1e-9);
    EXPECT_NEAR(m.next(l, r), 0.20, 1e-15);
    const auto same = m.pop_equal(l, r, m.next(l, r));
    ASSERT_EQ(same.size(), 1u);
    EXPECT_EQ(same[0].left, 0u);
    EXPECT_EQ(same[0].right, 0u);
    // (0,1) = 0.42 and (1,0) = 0.50 are both distinct; 0.42 is the new top.
    EXPECT_EQ(m.frontier_size(), 2u);
    EXPECT_NEAR(m.next(l, r), 0.42, 1e-15);
}

TEST(Merger, DiamondVisitedOnce)
{
    ListSource l, r;
    l.values = {0.0, 1.0};
    r.values = {0.0, 1.0};
    LazyPairMerger m(0.0, 1e-9);
    const auto all = drain(m, l, r);
    ASSERT_EQ(all.size(), 4u);
    int eleven = 0;
    for (const auto& d : all) eleven += d.left == 1 && d.right == 1;
    EXPECT_EQ(eleven, 1);
    EXPECT_EQ(all.back().value, 2.0);
}

TEST(Merger, EqualValuesPoppedTogether)
{
    ListSource l, r;
    l.values = {0.0, 0.0, 0.5};
    r.values = {0.0, 0.5};
    LazyPairMerger m(0.1, 1e-9);
    const auto first = m.pop_equal(l, r, m.next(l, r));
    ASSERT_EQ(first.size(), 2u);
    EXPECT_EQ(first[1].left, 1u);
    const double v = m.next(l, r);
    EXPECT_NEAR(v, 0.6, 1e-15);
    EXPECT_EQ(m.pop_equal(l, r, v).size(), 3u);
}

TEST(Merger, ExhaustedChildParksThenRevives)
{
    ListSource l, r;
    l.values = {0.0, 0.3};
    r.values = {0.0, 0.2};
    l.visible = 1;
    LazyPairMerger m(0.0, 1e-9);
    auto got = drain(m, l, r);
    ASSERT_EQ(got.size(), 2u); // (0,0), (0,1)
    // (1,0) and (1,1) wait on the left side; (0,2) is past the right end.
    EXPECT_EQ(m.parked(), 3u);
    l.visible = 2;
    m.revive();
    const auto more = drain(m, l, r);
    ASSERT_EQ(more.size(), 2u);
    EXPECT_NEAR(more[0].value, 0.3, 1e-15);
    EXPECT_NEAR(more[1].value, 0.5, 1e-15);
}

TEST(Merger, RandomListsMatchSortedSum)
{
    std::mt19937_64 rng(31);
    for (int it = 0; it < 300; ++it) {
        ListSource l, r;
        const std::size_t nl = 1 + rng() % 12, nr = 1 + rng() % 12;
        for (std::size_t i = 0; i < nl; ++i) l.values.push_back(static_cast<double>(rng() % 6) / 8);
        for (std::size_t i = 0; i < nr; ++i) r.values.push_back(static_cast<double>(rng() % 6) / 8);
        std::sort(l.values.begin(), l.values.end());
        std::sort(r.values.begin(), r.values.end());
        const double lambda = 0.125;
        const double ub = static_cast<double>(rng() % 16) / 8;
        std::vector<double> want;
        for (double a : l.values)
            for (double b : r.values)
                if (a + b + lambda <= ub + 1e-9) want.push_back(a + b + lambda);
        std::sort(want.begin(), want.end());
        LazyPairMerger m(lambda, 1e-9);
        const auto got = drain(m, l, r, ub);
        ASSERT_EQ(got.size(), want.size());
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].value, want[i]);
            EXPECT_EQ(got[i].value, l.values[got[i].left] + r.values[got[i].right] + lambda);
            EXPECT_TRUE(seen.insert({got[i].left, got[i].right}).second);
        }
    }
}

TEST(Enumerate, ChildUpperBound)
{
    EXPECT_NEAR(child_upper_bound(0.5, 0.1, 0.01), 0.39, 1e-15);
    EXPECT_LT(child_upper_bound(0.5, 0.6, 0.01), 0.0);
    EXPECT_EQ(child_upper_bound(0.5, 0.25, 0.0), 0.25);
}

TEST(Enumerate, StrictlyIncreasingValues)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto d = random_dataset(seed + 50, 40, 5);
        RashomonEnumerator e(d, base_config(3, 0.01, 1.0));
        const auto groups = e.run();
        for (std::size_t i = 1; i < groups.size(); ++i) EXPECT_GT(groups[i].value, groups[i - 1].value + 1e-9);
        ASSERT_FALSE(groups.empty());
        EXPECT_NEAR(groups.front().total_cost, e.optimal_cost(), 1e-12);
        EXPECT_LE(groups.back().total_cost, e.theta() + 1e-9);
    }
}

TEST(Enumerate, ExhaustionIsSticky)
{
    const auto d = random_dataset(3, 20, 3);
    RashomonEnumerator e(d, base_config(2, 0.01, 0.2));
    e.run();
    EXPECT_TRUE(e.exhausted());
    EXPECT_FALSE(e.next());
    EXPECT_FALSE(e.next());
}

TEST(Enumerate, EpsilonZeroGivesOptimaOnly)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto d = random_dataset(seed, 30, 5);
        RashomonEnumerator e(d, base_config(3, 0.01, 0.0));
        const auto groups = e.run();
        ASSERT_EQ(groups.size(), 1u);
        EXPECT_NEAR(groups[0].total_cost, e.optimal_cost(), 1e-12);
        const auto all = oracle::scored_trees(d, 3, 0.01, false);
        EXPECT_EQ(groups[0].count, BigCount(oracle::within(all, all.front().cost).size()));
    }
}

TEST(Enumerate, AnytimePrefix)
{
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto d = random_dataset(seed, 40, 6);
        const auto cfg = base_config(3, 0.01, 0.6);
        const Stream full = stream_of(d, cfg);
        for (std::size_t k : {std::size_t{1}, std::size_t{3}, full.values.size() / 2}) {
            RashomonEnumerator e(d, cfg);
            std::vector<EmittedGroup> part;
            for (std::size_t i = 0; i < k; ++i) {
                auto g = e.next();
                ASSERT_TRUE(g);
                part.push_back(*g);
            }
            const auto listed = list_all(part);
            for (std::size_t i = 0; i < k; ++i) {
                EXPECT_EQ(part[i].value, full.values[i]);
                EXPECT_EQ(part[i].count.str(), full.counts[i]);
            }
            ASSERT_LE(listed.size(), full.trees.size());
            for (std::size_t i = 0; i < listed.size(); ++i) EXPECT_EQ(listed[i].text, full.trees[i]);
        }
    }
}

TEST(Enumerate, CacheAndFastPathAreTransparent)
{
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto d = random_dataset(seed + 7, 40, 5);
        for (int depth : {2, 3, 4}) {
            auto cfg = base_config(depth, 0.01, depth < 4 ? 0.5 : 0.15);
            cfg.ignore_trivial_extensions = seed % 2;
            const Stream ref = stream_of(d, cfg);
            for (int mode = 1; mode < 4; ++mode) {
                auto alt = cfg;
                alt.use_cache = mode & 1 ? false : true;
                alt.use_depth2 = mode & 2 ? false : true;
                const Stream s = stream_of(d, alt);
                EXPECT_EQ(s.values, ref.values) << "mode " << mode;
                EXPECT_EQ(s.counts, ref.counts) << "mode " << mode;
                // The fast path orders trees inside a group differently; only
                // the cache toggle is required to be bit-identical.
                if (alt.use_depth2)
                    EXPECT_EQ(s.trees, ref.trees) << "mode " << mode;
                else
                    EXPECT_EQ(s.per_group, ref.per_group) << "mode " << mode;
            }
        }
    }
}

TEST(Enumerate, RegressionMatchesOracle)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto d = random_regression(seed, 20, 4);
        for (bool nt : {false, true}) {
            EnumerationConfig cfg;
            cfg.depth = 3;
            cfg.objective = ObjectiveConfig::regression(0.5);
            cfg.epsilon = 0.2;
            cfg.ignore_trivial_extensions = nt;
            RashomonEnumerator e(d, cfg);
            auto got = list_all(e.run());
            const auto want = oracle::within(oracle::scored_trees(d, 3, 0.5, nt), e.theta(), 1e-4);
            ASSERT_EQ(got.size(), want.size());
            std::vector<std::pair<std::string, double>> a, b;
            // Groups merge values within the regression tolerance, so compare
            // each tree's own objective and check it against its group.
            for (const auto& t : got) {
                const double own = evaluate_objective(parse_tree(t.text), d, cfg.objective);
                EXPECT_NEAR(own, t.cost, cfg.objective.tolerance + 1e-9);
                a.push_back({t.shape, own});
            }
            for (const auto& t : want) b.push_back({t.shape, t.cost});
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            for (std::size_t i = 0; i < a.size(); ++i) {
                EXPECT_EQ(a[i].first, b[i].first);
                EXPECT_NEAR(a[i].second, b[i].second, 1e-6);
            }
        }
    }
}

TEST(Enumerate, MaxTreesStopsEarly)
{
    const auto d = random_dataset(5, 40, 6);
    EnumerationConfig cfg;
    cfg.depth = 3;
    cfg.objective = ObjectiveConfig::classification(0.01);
    RashomonEnumerator e(d, cfg);
    const auto groups = e.run(BigCount(25));
    EXPECT_GE(e.trees_emitted(), 25);
    EXPECT_LT(e.trees_emitted() - groups.back().count, 25);
    EXPECT_FALSE(e.exhausted());
}

TEST(Enumerate, InvalidConfig)
{
    const auto d = random_dataset(5, 20, 3);
    auto cfg = base_config(-1, 0.01, 0.1);
    EXPECT_THROW(RashomonEnumerator(d, cfg), std::invalid_argument);
    cfg = base_config(2, 0.01, -0.1);
    EXPECT_THROW(RashomonEnumerator(d, cfg), std::invalid_argument);
    cfg = base_config(2, 0.01, 0.1);
    cfg.allowed_features = {true};
    EXPECT_THROW(RashomonEnumerator(d, cfg), std::invalid_argument);
}

TEST(SearchNodes, SharedAndInstrumented)
{
    const auto d = random_dataset(9, 40, 5);
    const auto cfg = base_config(3, 0.01, 0.5);
    Engine eng(d, cfg);
    const DataView all = DataView::all(d);
    SearchNode* n = eng.node(all, 3, 0.3);
    EXPECT_EQ(eng.node(all, 3, 0.2), n);
    EXPECT_EQ(eng.stats().cache_hits, 1u);
    EXPECT_EQ(n->upper_bound(), 0.3);

    ASSERT_TRUE(n->get_nth(0, 0.3));
    const auto calls = eng.stats().produce_calls;
    n->get_nth(0, 0.3);
    EXPECT_EQ(eng.stats().produce_calls, calls);
    const auto produced = n->produced();
    if (n->get_nth(produced, 0.3)) EXPECT_EQ(n->produced(), produced + 1);
    EXPECT_EQ(n->get_nth(100000, 0.3), nullptr);

    // A reader with a smaller bound sees only groups within it.
    for (std::size_t i = 0; i < n->produced(); ++i) {
        const auto* g = n->get_nth(i, 0.15);
        if (g) EXPECT_LE(g->value(), 0.15 + 1e-9);
    }
    // Raising the bound extends the node.
    const auto before = n->produced();
    eng.node(all, 3, 0.6)->get_nth(before + 5, 0.6);
    EXPECT_EQ(n->upper_bound(), 0.6);
    EXPECT_GT(n->produced(), before);
}
