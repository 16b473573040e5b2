#ifndef RASHOMON_ANALYSIS_HPP
#define RASHOMON_ANALYSIS_HPP

#include "rashomon/enumerate.hpp"

#include <optional>
#include <vector>

namespace rashomon {

struct MultiplierResult {
    /// Smallest multiplier reaching the target; empty when the optimum is 0
    /// (the multiplicative bound cannot grow).
    std::optional<double> epsilon;
    BigCount achieved;       // trees up to and including the last needed group
    bool reached = false;    // false if the whole space holds fewer trees
    double optimal_cost = 0.0;
    double last_cost = 0.0;  // total cost of the last needed group
};

/// Smallest epsilon whose Rashomon set holds at least `target` trees.
/// `base` supplies depth, objective, and split options; its bounds are ignored.
MultiplierResult find_min_multiplier(const BinaryDataset& data, const EnumerationConfig& base,
                                     const BigCount& target);

/// Sorted total costs by tree rank.
struct RashomonCurve {
    std::vector<double> costs;
    double theta = 0.0;
    std::size_t enumerated = 0; // entries before padding
};

/// The first `size` tree costs of the enumeration, padded with `pad` when
/// fewer trees exist.
RashomonCurve rashomon_curve(const BinaryDataset& data, const EnumerationConfig& config, std::size_t size,
                             std::optional<double> pad = std::nullopt);

double curve_area(const RashomonCurve& curve);

struct LofoScore {
    int feature = 0;
    double score = 0.0;
    int rank = 0; // 1 = most important
};

struct LofoResult {
    RashomonCurve baseline;
    std::vector<RashomonCurve> without; // per feature
    std::vector<LofoScore> scores;      // by feature index
};

/// Leave-one-feature-out importance: increase in the area under the sorted
/// cost curve of the `set_size` best trees when a feature may not be split on.
/// Curves are padded to `set_size` with the baseline's last cost.
LofoResult lofo_importance(const BinaryDataset& data, const EnumerationConfig& base, std::size_t set_size);

} // namespace rashomon

#endif
