#ifndef RASHOMON_ENUMERATE_HPP
#define RASHOMON_ENUMERATE_HPP

#include "rashomon/data.hpp"
#include "rashomon/depth2.hpp"
#include "rashomon/objective.hpp"
#include "rashomon/optdp.hpp"
#include "rashomon/solutions.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rashomon {

inline constexpr double kDefaultEpsilon = 1e6;

/// Indexed access to one side of a sorted Cartesian sum. Returns nothing
/// when the index is past the end of what the side can currently offer.
class MergeSource {
public:
    virtual ~MergeSource() = default;
    virtual std::optional<double> value_at(std::size_t index) = 0;
};

/// Lazily walks the sorted sums left[i] + right[j] + lambda with a min-heap
/// frontier and a visited set. Pairs whose side ran out are parked; revive()
/// puts them back on the frontier (keyed by their predecessor's value) after
/// the sides have been extended.
class LazyPairMerger {
public:
    struct Pair {
        std::uint32_t left = 0;
        std::uint32_t right = 0;
    };

    /// `seed_key` is a lower bound on the (0, 0) sum (its exact value when known).
    LazyPairMerger(double lambda, double tolerance, double seed_key = -kInfinity);

    /// Smallest pending sum, or infinity when the frontier is empty. Parked
    /// or revived pairs are only resolved while their key is <= `limit`, so
    /// a result above `limit` may be a lower bound.
    double next(MergeSource& left, MergeSource& right, double limit = kInfinity);
    /// Removes every pair whose sum is <= value + tolerance, closing the
    /// equal-valued frontier. Sorted by (left, right).
    std::vector<Pair> pop_equal(MergeSource& left, MergeSource& right, double value);
    void revive();

    std::size_t frontier_size() const { return heap_.size(); }
    std::size_t parked() const { return blocked_.size(); }

private:
    struct Candidate {
        double value;
        std::uint32_t left, right;
        bool resolved;
    };
    struct Later {
        bool operator()(const Candidate& a, const Candidate& b) const
        {
            if (a.value != b.value) return a.value > b.value;
            if (a.left != b.left) return a.left > b.left;
            return a.right > b.right;
        }
    };

    void resolve_top(MergeSource& left, MergeSource& right, double limit);
    bool visit(std::uint32_t l, std::uint32_t r);

    double lambda_, tol_;
    std::priority_queue<Candidate, std::vector<Candidate>, Later> heap_;
    std::unordered_set<std::uint64_t> visited_;
    std::vector<Candidate> blocked_;
};

struct EnumerationConfig {
    int depth = 3;
    ObjectiveConfig objective;
    /// Rashomon multiplier; kDefaultEpsilon when neither this nor theta is set.
    std::optional<double> epsilon;
    /// Absolute bound on total cost; overrides epsilon.
    std::optional<double> theta;
    bool ignore_trivial_extensions = false;
    /// Empty = all features may be split on.
    std::vector<bool> allowed_features;
    bool use_cache = true;
    bool use_depth2 = true;
};

struct EngineStats {
    std::size_t nodes_created = 0;
    std::size_t cache_hits = 0;
    std::size_t groups_built = 0;
    std::size_t depth2_generations = 0;
    std::size_t produce_calls = 0;
};

class Engine;

/// Enumeration state of one (sample set, depth) subproblem. Groups are
/// produced in increasing value order into the sorted solution list.
class SearchNode {
public:
    SearchNode(Engine& engine, DataView view, int depth, double ub);
    virtual ~SearchNode() = default;
    SearchNode(const SearchNode&) = delete;
    SearchNode& operator=(const SearchNode&) = delete;

    /// Group `index` if its value is within `bound`, producing groups as
    /// needed. A bound above the node's current one raises it.
    const SolutionGroup* get_nth(std::size_t index, double bound);

    const DataView& view() const { return view_; }
    int depth() const { return depth_; }
    double upper_bound() const { return ub_; }
    std::size_t produced() const { return ssl_.size(); }

protected:
    /// Next group with value within `bound` (never above ub_), or null.
    virtual const SolutionGroup* produce(double bound) = 0;
    virtual void on_raise() {}

    Engine& engine_;
    DataView view_;
    int depth_;
    double ub_;
    std::vector<const SolutionGroup*> ssl_;
};

/// Owns search nodes, the group arena and the phase-one solver.
class Engine {
public:
    Engine(const BinaryDataset& data, const EnumerationConfig& config);
    ~Engine();

    SearchNode* node(const DataView& view, int depth, double ub);
    /// Optimal subproblem value (no root lambda).
    double optimal_value(const DataView& view, int depth);
    const SolutionGroup* add_group(double value, std::vector<GroupEntry> entries);

    const BinaryDataset& data() const { return data_; }
    const EnumerationConfig& config() const { return config_; }
    const ObjectiveConfig& objective() const { return config_.objective; }
    OptimalSolver& solver() { return solver_; }
    EngineStats& stats() { return stats_; }
    const EngineStats& stats() const { return stats_; }

private:
    const BinaryDataset& data_;
    EnumerationConfig config_;
    OptimalSolver solver_;
    std::unordered_map<CacheKey, std::unique_ptr<SearchNode>, CacheKeyHash> cache_;
    std::vector<std::unique_ptr<SearchNode>> uncached_;
    std::deque<SolutionGroup> groups_;
    EngineStats stats_;
};

/// One group of the Rashomon set stream.
struct EmittedGroup {
    double value = 0.0;
    double total_cost = 0.0;
    BigCount count;
    const SolutionGroup* group = nullptr;
};

/// Anytime enumerator of the Rashomon set in non-decreasing objective order.
/// The dataset must outlive the enumerator.
class RashomonEnumerator {
public:
    RashomonEnumerator(const BinaryDataset& data, EnumerationConfig config);

    /// Next group, or nothing once the bounded set is exhausted.
    std::optional<EmittedGroup> next();
    /// Continue until at least `max_trees` trees in total have been emitted
    /// (or exhaustion); returns the groups emitted by this call.
    std::vector<EmittedGroup> run(const std::optional<BigCount>& max_trees = std::nullopt);

    double optimal_cost() const { return optimal_cost_; }
    const Tree& optimal_tree() const { return optimal_tree_; }
    double theta() const { return theta_; }
    bool exhausted() const { return exhausted_; }
    const BigCount& trees_emitted() const { return trees_; }
    std::size_t groups_emitted() const { return index_; }
    const EngineStats& stats() const { return engine_.stats(); }
    const EnumerationConfig& config() const { return engine_.config(); }

private:
    Engine engine_;
    double optimal_cost_ = 0.0;
    Tree optimal_tree_;
    double theta_ = 0.0;
    SearchNode* root_ = nullptr;
    std::size_t index_ = 0;
    BigCount trees_;
    bool exhausted_ = false;
};

/// child bound = ub - sibling optimum - lambda
inline double child_upper_bound(double ub, double sibling_optimal, double lambda)
{
    return ub - sibling_optimal - lambda;
}

} // namespace rashomon

#endif
