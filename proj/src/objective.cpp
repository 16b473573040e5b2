#include "rashomon/objective.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rashomon {

void ObjectiveConfig::validate() const
{
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (!(tolerance > 0.0)) throw std::invalid_argument("equality tolerance must be > 0");
}

LeafCost classification_leaf(const int* class_counts, int num_classes, std::size_t dataset_size)
{
    LeafCost c;
    int n = 0, best = -1;
    for (int k = 0; k < num_classes; ++k) {
        n += class_counts[k];
        if (class_counts[k] > best) best = class_counts[k];
    }
    for (int k = 0; k < num_classes; ++k)
        if (class_counts[k] == best) c.optimal_labels |= std::uint64_t{1} << k;
    c.prediction = static_cast<double>(std::countr_zero(c.optimal_labels));
    c.value = static_cast<double>(n - best) / static_cast<double>(dataset_size);
    c.free = n == 0;
    return c;
}

LeafCost regression_leaf(double n, double sum, double sumsq)
{
    LeafCost c;
    if (n <= 0) {
        c.free = true;
        return c;
    }
    c.prediction = sum / n;
    c.value = std::max(0.0, sumsq - sum * sum / n);
    return c;
}

LeafCost leaf_cost(const DataView& view, const ObjectiveConfig& config)
{
    const auto& data = view.dataset();
    if (config.task != data.task()) throw std::invalid_argument("objective task does not match dataset");
    if (config.task == Task::classification) {
        std::vector<int> counts(static_cast<std::size_t>(data.num_classes()));
        for (int k = 0; k < data.num_classes(); ++k)
            counts[static_cast<std::size_t>(k)] = static_cast<int>(view.members().count_and(data.class_members(k)));
        return classification_leaf(counts.data(), data.num_classes(), data.num_samples());
    }
    const auto& y = data.labels().values;
    LeafCost c;
    if (view.empty()) {
        c.free = true;
        return c;
    }
    double sum = 0.0;
    view.members().for_each([&](std::size_t i) { sum += y[i]; });
    const double mean = sum / static_cast<double>(view.size());
    double sse = 0.0;
    view.members().for_each([&](std::size_t i) { sse += (y[i] - mean) * (y[i] - mean); });
    c.prediction = mean;
    c.value = sse;
    return c;
}

RashomonBound rashomon_bound(double optimal_total_cost, double epsilon)
{
    if (epsilon < 0) throw std::invalid_argument("Rashomon multiplier must be >= 0");
    if (optimal_total_cost < 0) throw std::invalid_argument("optimal cost must be >= 0");
    return {(1.0 + epsilon) * optimal_total_cost};
}

bool is_trivial_leaf_pair(const LeafCost& left, const LeafCost& right, Task task)
{
    if (left.free || right.free) return false;
    if (task == Task::regression) return left.prediction == right.prediction;
    return left.optimal_labels == right.optimal_labels && std::has_single_bit(left.optimal_labels);
}

std::pair<double, double> resolve_leaf_pair(const LeafCost& left, const LeafCost& right, Task task)
{
    if (task == Task::regression || left.prediction != right.prediction) return {left.prediction, right.prediction};
    if (left.free) return {right.prediction == 0.0 ? 1.0 : 0.0, right.prediction};
    if (right.free) return {left.prediction, left.prediction == 0.0 ? 1.0 : 0.0};
    const auto l = static_cast<int>(left.prediction);
    const std::uint64_t ralt = right.optimal_labels & ~(std::uint64_t{1} << l);
    if (ralt) return {left.prediction, static_cast<double>(std::countr_zero(ralt))};
    const auto r = static_cast<int>(right.prediction);
    const std::uint64_t lalt = left.optimal_labels & ~(std::uint64_t{1} << r);
    if (lalt) return {static_cast<double>(std::countr_zero(lalt)), right.prediction};
    return {left.prediction, right.prediction};
}

} // namespace rashomon
