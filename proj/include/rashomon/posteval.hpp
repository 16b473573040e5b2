#ifndef RASHOMON_POSTEVAL_HPP
#define RASHOMON_POSTEVAL_HPP

#include "rashomon/enumerate.hpp"
#include "rashomon/solutions.hpp"
#include "rashomon/tree.hpp"

#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace rashomon {

using StatTuple = std::vector<double>;

/// A separable secondary objective: a statistic per leaf, an associative
/// combiner for sibling subtrees, and a finalizer to objective coordinates.
/// `minimize` maps finalized coordinates to the all-minimized orientation
/// used by pareto_front.
struct SecondaryObjectiveSpec {
    std::size_t arity = 0;
    std::function<StatTuple(const DataView& view, double prediction)> leaf_stat;
    std::function<StatTuple(const StatTuple& left, const StatTuple& right)> combine_stat;
    std::function<std::vector<double>(const StatTuple&)> finalize;
    std::function<std::vector<double>(const std::vector<double>&)> minimize;
};

/// Raised when a finalizer cannot produce a value (e.g. a TPR with no positives).
class UndefinedStatistic : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (misclassified, predicted-positive positives in group 0, in group 1).
/// Group 1 = samples satisfying `sensitive_feature`. Finalizes to
/// (accuracy, TPR0 - TPR1); positives per group are counted over the whole
/// dataset. Throws UndefinedStatistic if a group has no positives.
SecondaryObjectiveSpec eq_opportunity_spec(const BinaryDataset& data, int sensitive_feature, int positive_class = 1);

/// The statistic of one tree computed by routing its leaves' sample sets.
StatTuple tree_stat(const Tree& tree, const DataView& view, const SecondaryObjectiveSpec& spec);

struct EvaluatedTuple {
    std::size_t group_index = 0; // position in the evaluated stream
    double total_cost = 0.0;
    StatTuple stat;
    BigCount rank;                // smallest tree rank within the group with this tuple
    Tree witness;
};

/// Distinct statistic tuples per group, computed bottom-up over the group
/// DAG with memoization. Groups whose tuple sets exceed `combo_cap` are
/// evaluated tree by tree instead.
class SecondaryEvaluator {
public:
    SecondaryEvaluator(const BinaryDataset& data, SecondaryObjectiveSpec spec, std::size_t combo_cap = 4096);

    /// Tuples of one emitted group, ordered by rank.
    std::vector<EvaluatedTuple> evaluate(const EmittedGroup& group, std::size_t group_index);

    std::size_t fallbacks() const { return fallbacks_; }
    const SecondaryObjectiveSpec& spec() const { return spec_; }

private:
    /// tuple -> smallest rank; the rank-0 leaf (when present) is kept apart.
    struct StatSet {
        std::optional<StatTuple> leaf;
        std::map<StatTuple, BigCount> rest;
        bool overflow = false;
    };
    const StatSet& stat_set(const SolutionGroup& g);
    StatTuple leaf_tuple(const LeafInfo& leaf, double prediction);
    void check(const StatTuple& t) const;

    const BinaryDataset& data_;
    SecondaryObjectiveSpec spec_;
    std::size_t cap_;
    std::unordered_map<const SolutionGroup*, StatSet> memo_;
    std::size_t fallbacks_ = 0;
};

/// Convenience over a stream prefix.
std::vector<EvaluatedTuple> evaluate_secondary(const BinaryDataset& data, const std::vector<EmittedGroup>& groups,
                                               const SecondaryObjectiveSpec& spec, std::size_t combo_cap = 4096);

struct ParetoPoint {
    std::vector<double> coordinates; // minimization orientation
    Tree witness;
    int tree_size = 0;                // leaves
    double total_cost = 0.0;
};

/// Incremental non-dominated set under coordinate-wise minimization.
/// Exact coordinate ties keep the earlier witness.
class ParetoFront {
public:
    /// Returns true if the point joined the front.
    bool add(ParetoPoint p);
    const std::vector<ParetoPoint>& points() const { return points_; }

private:
    std::vector<ParetoPoint> points_;
};

bool dominates(const std::vector<double>& a, const std::vector<double>& b);

std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points);

struct ConstrainedResult {
    Tree tree;
    double total_cost = 0.0;
    std::vector<double> objectives; // finalized
    BigCount trees_examined;
};

/// Enumerate in batches of at least `batch` trees and return the first
/// (lowest primary cost, then lowest rank) tree whose finalized statistic
/// satisfies `constraint`; nothing if the bounded set holds none.
std::optional<ConstrainedResult> batched_constrained_search(
        const BinaryDataset& data, const EnumerationConfig& config, const SecondaryObjectiveSpec& spec,
        const std::function<bool(const std::vector<double>&)>& constraint, std::uint64_t batch = 100000);

} // namespace rashomon

#endif
