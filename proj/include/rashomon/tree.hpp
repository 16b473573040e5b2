#ifndef RASHOMON_TREE_HPP
#define RASHOMON_TREE_HPP

#include "rashomon/data.hpp"
#include "rashomon/objective.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace rashomon {

struct TreeNode;

/// Immutable binary decision tree with structurally shared subtrees.
/// Samples that satisfy a split's feature go right.
class Tree {
public:
    Tree() = default;

    static Tree leaf(double prediction);
    static Tree split(int feature, Tree left, Tree right);

    bool is_leaf() const;
    int feature() const;
    double prediction() const;
    const Tree& left() const;
    const Tree& right() const;
    bool valid() const { return root_ != nullptr; }

    int num_leaves() const;
    int depth() const;

    double predict(std::span<const std::uint8_t> features) const;
    /// Prediction for sample `i` of `data` without copying its row.
    double predict(const BinaryDataset& data, std::size_t sample) const;

    friend bool operator==(const Tree& a, const Tree& b);

private:
    explicit Tree(std::shared_ptr<const TreeNode> n) : root_{std::move(n)} {}
    std::shared_ptr<const TreeNode> root_;
};

struct TreeNode {
    int feature = -1;
    double prediction = 0.0;
    Tree left, right;
};

/// Shortest round-trip decimal; integral values print without a fraction.
std::string format_number(double v);

/// Canonical compact JSON: {"feature":i,"left":..,"right":..} or {"predict":v}.
std::string serialize_tree(const Tree& tree);
Tree parse_tree(std::string_view json);

/// Objective of `tree` computed by routing every sample through it:
/// loss (misclassification fraction or SSE) plus lambda per leaf.
double evaluate_objective(const Tree& tree, const BinaryDataset& data, const ObjectiveConfig& config);

/// Number of training samples the tree misclassifies (classification only).
std::size_t count_misclassified(const Tree& tree, const BinaryDataset& data);

} // namespace rashomon

#endif
