#include "rashomon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rashomon {

MultiplierResult find_min_multiplier(const BinaryDataset& data, const EnumerationConfig& base, const BigCount& target)
{
    if (target < 1) throw std::invalid_argument("target count must be >= 1");
    EnumerationConfig cfg = base;
    cfg.theta.reset();
    cfg.epsilon = kDefaultEpsilon;
    RashomonEnumerator e(data, cfg);
    const auto groups = e.run(target);

    MultiplierResult r;
    r.optimal_cost = e.optimal_cost();
    r.achieved = e.trees_emitted();
    r.reached = r.achieved >= target;
    if (groups.empty()) return r;
    r.last_cost = groups.back().total_cost;
    // The DP optimum and the first group's cost may differ in the last bit.
    if (r.optimal_cost > 0.0)
        r.epsilon = values_equal(r.last_cost, r.optimal_cost, cfg.objective)
                            ? 0.0
                            : r.last_cost / r.optimal_cost - 1.0;
    return r;
}

RashomonCurve rashomon_curve(const BinaryDataset& data, const EnumerationConfig& config, std::size_t size,
                             std::optional<double> pad)
{
    RashomonCurve c;
    RashomonEnumerator e(data, config);
    c.theta = e.theta();
    while (c.costs.size() < size) {
        auto g = e.next();
        if (!g) break;
        const BigCount room = size - c.costs.size();
        const std::size_t take = static_cast<std::size_t>(g->count < room ? g->count : room);
        c.costs.insert(c.costs.end(), take, g->total_cost);
    }
    c.enumerated = c.costs.size();
    if (pad) c.costs.resize(size, *pad);
    return c;
}

double curve_area(const RashomonCurve& curve)
{
    return std::accumulate(curve.costs.begin(), curve.costs.end(), 0.0);
}

LofoResult lofo_importance(const BinaryDataset& data, const EnumerationConfig& base, std::size_t set_size)
{
    if (set_size < 1) throw std::invalid_argument("set size must be >= 1");
    const std::size_t nf = data.num_features();
    std::vector<bool> allowed = base.allowed_features.empty() ? std::vector<bool>(nf, true) : base.allowed_features;
    if (allowed.size() != nf) throw std::invalid_argument("allowed-feature mask has wrong length");

    EnumerationConfig cfg = base;
    cfg.theta.reset();
    cfg.epsilon = kDefaultEpsilon;
    cfg.allowed_features = allowed;

    LofoResult r;
    r.baseline = rashomon_curve(data, cfg, set_size);
    if (r.baseline.costs.empty()) throw std::logic_error("baseline enumeration produced no trees");
    const double theta_base = r.baseline.costs.back();
    r.baseline.costs.resize(set_size, theta_base);
    r.baseline.theta = theta_base;
    const double base_area = curve_area(r.baseline);
    // Scores within the equality tolerance of zero accumulated over the
    // curve are rounding noise between two evaluations of the same trees.
    const double noise = cfg.objective.tolerance * static_cast<double>(set_size);

    for (std::size_t f = 0; f < nf; ++f) {
        EnumerationConfig without = cfg;
        without.allowed_features[f] = false;
        without.theta = theta_base;
        RashomonCurve curve = rashomon_curve(data, without, set_size, theta_base);
        curve.theta = theta_base;
        double score = curve_area(curve) - base_area;
        if (std::fabs(score) <= noise) score = 0.0;
        r.scores.push_back({static_cast<int>(f), score, 0});
        r.without.push_back(std::move(curve));
    }
    std::vector<std::size_t> order(nf);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return r.scores[a].score > r.scores[b].score; });
    for (std::size_t i = 0; i < nf; ++i) r.scores[order[i]].rank = static_cast<int>(i + 1);
    return r;
}

} // namespace rashomon
