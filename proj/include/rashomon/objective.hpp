#ifndef RASHOMON_OBJECTIVE_HPP
#define RASHOMON_OBJECTIVE_HPP

#include "rashomon/data.hpp"

#include <cstdint>
#include <limits>

namespace rashomon {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Objective settings. Values are in normalized units: misclassification
/// fraction of the full dataset (classification) or sum of squared errors
/// (regression). `lambda` is the per-leaf cost in the same units.
struct ObjectiveConfig {
    Task task = Task::classification;
    double lambda = 0.0;
    double tolerance = 1e-9;

    static ObjectiveConfig classification(double lambda) { return {Task::classification, lambda, 1e-9}; }
    static ObjectiveConfig regression(double lambda) { return {Task::regression, lambda, 1e-4}; }
    static ObjectiveConfig for_task(Task task, double lambda)
    {
        return task == Task::classification ? classification(lambda) : regression(lambda);
    }

    void validate() const;
};

/// Leaf evaluation: objective value, default prediction and, for
/// classification, the set of labels attaining the value (bit k = class k).
/// `free` marks an empty leaf whose label is irrelevant.
struct LeafCost {
    double value = 0.0;
    double prediction = 0.0;
    std::uint64_t optimal_labels = 0;
    bool free = false;
};

LeafCost leaf_cost(const DataView& view, const ObjectiveConfig& config);

/// Leaf cost from sufficient statistics. `class_counts` has one entry per class.
LeafCost classification_leaf(const int* class_counts, int num_classes, std::size_t dataset_size);
LeafCost regression_leaf(double n, double sum, double sumsq);

/// Value of a branching node: both subtrees plus one branching cost.
inline double combine(double left, double right, double lambda) { return left + right + lambda; }

/// Total tree cost from a root value: the one leaf not paid for by combines.
inline double total_cost(double root_value, double lambda) { return root_value + lambda; }

struct RashomonBound {
    double theta = 0.0;
};

/// theta = (1 + epsilon) * optimal_total_cost
RashomonBound rashomon_bound(double optimal_total_cost, double epsilon);

inline bool values_equal(double a, double b, const ObjectiveConfig& c)
{
    return (a > b ? a - b : b - a) <= c.tolerance;
}

/// `value <= bound` up to the equality tolerance.
inline bool within(double value, double bound, const ObjectiveConfig& c)
{
    return value <= bound + c.tolerance;
}

/// True when a split whose two children are both leaves would be a trivial
/// extension no matter which optimal labels the leaves take.
bool is_trivial_leaf_pair(const LeafCost& left, const LeafCost& right, Task task);

/// Labels for two sibling leaves when trivial extensions are suppressed:
/// keeps defaults when they differ, otherwise moves the right (then the left)
/// leaf to its lowest alternative optimal label. Requires !is_trivial_leaf_pair.
std::pair<double, double> resolve_leaf_pair(const LeafCost& left, const LeafCost& right, Task task);

} // namespace rashomon

#endif
