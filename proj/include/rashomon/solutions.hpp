#ifndef RASHOMON_SOLUTIONS_HPP
#define RASHOMON_SOLUTIONS_HPP

#include "rashomon/objective.hpp"
#include "rashomon/tree.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <vector>

namespace rashomon {

using BigCount = boost::multiprecision::cpp_int;

/// A leaf solution together with the recipe for its sample set: the base
/// member set intersected with up to two (feature, side) conditions.
struct LeafInfo {
    LeafCost cost;
    const Bitset* base = nullptr;
    int cond_feature[2] = {-1, -1};
    int cond_side[2] = {0, 0};

    Bitset members(const BinaryDataset& data) const;
};

class SolutionGroup;

/// Every combination of a tree from `left` with a tree from `right`.
/// `skip_leaf_pair` drops the combination of both rank-0 leaves (a trivial
/// extension); `resolve_labels` relabels that combination so the two leaves
/// differ.
struct PairRef {
    const SolutionGroup* left = nullptr;
    const SolutionGroup* right = nullptr;
    bool skip_leaf_pair = false;
    bool resolve_labels = false;

    BigCount count() const;
};

/// A leaf (feature < 0) or all splits on `feature` with the listed children.
struct GroupEntry {
    int feature = -1;
    LeafInfo leaf;
    std::vector<PairRef> pairs;

    bool is_leaf() const { return feature < 0; }
};

/// All subtree solutions sharing one value. Children must be complete before
/// a group is built; counts are fixed at construction.
class SolutionGroup {
public:
    SolutionGroup(double value, std::vector<GroupEntry> entries);

    double value() const { return value_; }
    const std::vector<GroupEntry>& entries() const { return entries_; }
    const BigCount& count() const { return count_; }
    /// A leaf entry, when present, is always first and is tree rank 0.
    bool has_leaf() const { return !entries_.empty() && entries_.front().is_leaf(); }
    const LeafInfo& leaf() const { return entries_.front().leaf; }

private:
    double value_;
    std::vector<GroupEntry> entries_;
    BigCount count_;
};

inline const BigCount& count_trees(const SolutionGroup& g) { return g.count(); }

/// Tree with the given rank: entries in order, then pairs in order, then
/// left-major over (left rank, right rank).
Tree tree_at(const SolutionGroup& group, const BigCount& rank);

/// The first min(limit, count) trees in rank order.
std::vector<Tree> materialize(const SolutionGroup& group, std::size_t limit);

/// Calls `f(tree)` for each of the first `limit` trees; stops early when f returns false.
template <typename F>
void for_each_tree(const SolutionGroup& group, const BigCount& limit, F&& f)
{
    const BigCount n = group.count() < limit ? group.count() : limit;
    for (BigCount r = 0; r < n; ++r)
        if (!f(tree_at(group, r))) return;
}

} // namespace rashomon

#endif
