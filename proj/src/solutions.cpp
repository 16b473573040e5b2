#include "rashomon/solutions.hpp"

#include <stdexcept>

namespace rashomon {

Bitset LeafInfo::members(const BinaryDataset& data) const
{
    if (!base) throw std::logic_error("leaf has no sample set");
    Bitset m = *base;
    for (int i = 0; i < 2; ++i) {
        if (cond_feature[i] < 0) continue;
        const Bitset& col = data.column(static_cast<std::size_t>(cond_feature[i]));
        if (cond_side[i])
            m &= col;
        else
            m.and_not(col);
    }
    return m;
}

BigCount PairRef::count() const
{
    BigCount c = left->count() * right->count();
    if (skip_leaf_pair) c -= 1;
    return c;
}

SolutionGroup::SolutionGroup(double value, std::vector<GroupEntry> entries)
    : value_{value}, entries_{std::move(entries)}
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.is_leaf()) {
            if (i != 0) throw std::logic_error("leaf entry must come first");
            count_ += 1;
            continue;
        }
        if (e.pairs.empty()) throw std::logic_error("branch entry without pairs");
        for (const auto& p : e.pairs) {
            if ((p.skip_leaf_pair || p.resolve_labels) && !(p.left->has_leaf() && p.right->has_leaf()))
                throw std::logic_error("leaf-pair flag on a pair without leaves");
            count_ += p.count();
        }
    }
}

Tree tree_at(const SolutionGroup& group, const BigCount& rank)
{
    BigCount r = rank;
    for (const auto& e : group.entries()) {
        if (e.is_leaf()) {
            if (r == 0) return Tree::leaf(e.leaf.cost.prediction);
            r -= 1;
            continue;
        }
        for (const auto& p : e.pairs) {
            const BigCount n = p.count();
            if (r >= n) {
                r -= n;
                continue;
            }
            if (p.skip_leaf_pair) r += 1;
            const BigCount& cr = p.right->count();
            const BigCount li = r / cr, ri = r % cr;
            if (p.resolve_labels && li == 0 && ri == 0) {
                const auto [lp, rp] = resolve_leaf_pair(p.left->leaf().cost, p.right->leaf().cost,
                                                        Task::classification);
                return Tree::split(e.feature, Tree::leaf(lp), Tree::leaf(rp));
            }
            return Tree::split(e.feature, tree_at(*p.left, li), tree_at(*p.right, ri));
        }
    }
    throw std::out_of_range("tree rank beyond group size");
}

std::vector<Tree> materialize(const SolutionGroup& group, std::size_t limit)
{
    std::vector<Tree> out;
    for_each_tree(group, BigCount(limit), [&](Tree t) {
        out.push_back(std::move(t));
        return true;
    });
    return out;
}

} // namespace rashomon
