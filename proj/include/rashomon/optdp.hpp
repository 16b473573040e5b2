#ifndef RASHOMON_OPTDP_HPP
#define RASHOMON_OPTDP_HPP

#include "rashomon/data.hpp"
#include "rashomon/objective.hpp"
#include "rashomon/tree.hpp"

#include <unordered_map>
#include <vector>

namespace rashomon {

/// Optimal subtree for a subproblem. `value` excludes the root lambda.
/// When `bound_exceeded` is set the optimum is above the requested bound and
/// `tree`/`value` hold the leaf solution.
struct OptSolution {
    double value = 0.0;
    Tree tree;
    bool bound_exceeded = false;
};

struct OptimalSolverOptions {
    bool use_cache = true;
    bool use_depth2 = true;
};

/// Bounded DP over (sample set, depth) subproblems. Only splits that leave
/// both sides non-empty are considered. Ties prefer the leaf, then the
/// lowest feature index.
class OptimalSolver {
public:
    OptimalSolver(const BinaryDataset& data, ObjectiveConfig config, std::vector<bool> allowed_features = {},
                  OptimalSolverOptions options = {});

    OptSolution solve(const DataView& view, int depth, double upper_bound = kInfinity);
    /// Optimal total cost and tree over the whole dataset.
    OptSolution solve_root(int depth) { return solve(DataView::all(data_), depth); }

    /// Subproblems evaluated without a cache hit.
    std::size_t computations() const { return computations_; }
    std::size_t cache_size() const { return cache_.size(); }
    const ObjectiveConfig& config() const { return config_; }

private:
    struct Entry {
        bool exact = false;
        double lower_bound = 0.0;
        OptSolution solution;
    };

    OptSolution compute(const DataView& view, int depth, double upper_bound);

    const BinaryDataset& data_;
    ObjectiveConfig config_;
    std::vector<bool> allowed_;
    OptimalSolverOptions options_;
    std::unordered_map<CacheKey, Entry, CacheKeyHash> cache_;
    std::size_t computations_ = 0;
};

/// Exact optimum for depth 1 or 2 from frequency counts alone.
OptSolution depth2_optimal(const DataView& view, int depth, const ObjectiveConfig& config,
                           const std::vector<bool>& allowed_features = {});

} // namespace rashomon

#endif
