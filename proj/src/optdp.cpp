#include "rashomon/optdp.hpp"

#include "rashomon/depth2.hpp"

#include <stdexcept>

namespace rashomon {

OptimalSolver::OptimalSolver(const BinaryDataset& data, ObjectiveConfig config, std::vector<bool> allowed_features,
                             OptimalSolverOptions options)
    : data_{data}, config_{config}, allowed_{std::move(allowed_features)}, options_{options}
{
    config_.validate();
    if (config_.task != data.task()) throw std::invalid_argument("objective task does not match dataset");
    if (!allowed_.empty() && allowed_.size() != data.num_features())
        throw std::invalid_argument("allowed-feature mask has wrong length");
}

OptSolution OptimalSolver::solve(const DataView& view, int depth, double upper_bound)
{
    if (depth < 0) throw std::invalid_argument("depth must be >= 0");
    if (!options_.use_cache) return compute(view, depth, upper_bound);

    CacheKey key = fingerprint(view, depth);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        const Entry& e = it->second;
        if (e.exact) {
            OptSolution s = e.solution;
            s.bound_exceeded = !within(s.value, upper_bound, config_);
            return s;
        }
        if (e.lower_bound >= upper_bound) return e.solution;
    }
    OptSolution s = compute(view, depth, upper_bound);
    Entry e;
    e.exact = !s.bound_exceeded;
    e.lower_bound = upper_bound;
    e.solution = s;
    cache_.insert_or_assign(std::move(key), std::move(e));
    return s;
}

OptSolution OptimalSolver::compute(const DataView& view, int depth, double upper_bound)
{
    ++computations_;
    const LeafCost leaf = leaf_cost(view, config_);
    OptSolution best{leaf.value, Tree::leaf(leaf.prediction), false};

    if (depth > 0 && leaf.value > 0.0) {
        if (depth <= 2 && options_.use_depth2) {
            best = depth2_optimal(view, depth, config_, allowed_);
        } else {
            const double lambda = config_.lambda;
            for (std::size_t f = 0; f < data_.num_features(); ++f) {
                if (!allowed_.empty() && !allowed_[f]) continue;
                auto [lv, rv] = split(view, f);
                if (lv.empty() || rv.empty()) continue;
                const double bound = std::min(upper_bound, best.value);
                const OptSolution l = solve(lv, depth - 1, bound - lambda);
                if (l.bound_exceeded || !within(l.value + lambda, bound, config_)) continue;
                const OptSolution r = solve(rv, depth - 1, bound - l.value - lambda);
                if (r.bound_exceeded) continue;
                const double v = combine(l.value, r.value, lambda);
                if (v < best.value - config_.tolerance) best = {v, Tree::split(static_cast<int>(f), l.tree, r.tree), false};
            }
        }
    }
    if (!within(best.value, upper_bound, config_)) return {leaf.value, Tree::leaf(leaf.prediction), true};
    return best;
}

namespace {

struct Best {
    double value;
    Tree tree;
};

Tree leaf_tree(const FrequencyCounts& c, int a, int sa, int b = -1, int sb = 0)
{
    return Tree::leaf(c.leaf(a, sa, b, sb).prediction);
}

/// Best subtree of depth <= 1 in cell (a, sa).
Best best_depth1(const FrequencyCounts& c, double lambda, double tol, int a, int sa)
{
    const LeafCost leaf = c.leaf(a, sa);
    Best best{leaf.value, Tree::leaf(leaf.prediction)};
    if (leaf.value <= 0.0) return best;
    for (int b = 0; b < c.num_features(); ++b) {
        if (b == a || !c.splits(b, a, sa)) continue;
        const double v = stump_value(c, lambda, b, a, sa);
        if (v < best.value - tol)
            best = {v, Tree::split(c.feature_id(b), leaf_tree(c, a, sa, b, 0), leaf_tree(c, a, sa, b, 1))};
    }
    return best;
}

} // namespace

OptSolution depth2_optimal(const DataView& view, int depth, const ObjectiveConfig& config,
                           const std::vector<bool>& allowed_features)
{
    if (depth < 1 || depth > 2) throw std::invalid_argument("depth2_optimal needs depth 1 or 2");
    const FrequencyCounts c(view, config, allowed_features);
    const double lambda = config.lambda, tol = config.tolerance;
    const LeafCost leaf = c.leaf();
    OptSolution best{leaf.value, Tree::leaf(leaf.prediction), false};
    if (leaf.value <= 0.0) return best;
    for (int a = 0; a < c.num_features(); ++a) {
        if (!c.splits(a)) continue;
        double v;
        Tree t;
        if (depth == 1) {
            v = stump_value(c, lambda, a);
            if (v < best.value - tol) t = Tree::split(c.feature_id(a), leaf_tree(c, a, 0), leaf_tree(c, a, 1));
        } else {
            const Best l = best_depth1(c, lambda, tol, a, 0);
            const Best r = best_depth1(c, lambda, tol, a, 1);
            v = combine(l.value, r.value, lambda);
            if (v < best.value - tol) t = Tree::split(c.feature_id(a), l.tree, r.tree);
        }
        if (t.valid()) best = {v, t, false};
    }
    return best;
}

} // namespace rashomon
