#ifndef RASHOMON_DEPTH2_HPP
#define RASHOMON_DEPTH2_HPP

#include "rashomon/data.hpp"
#include "rashomon/objective.hpp"

#include <vector>

namespace rashomon {

/// Sufficient statistics of one subproblem for every tree of depth <= 2:
/// per-class counts (classification) or (n, Σy, Σy²) (regression) for the
/// whole view, each single feature, and each feature pair. Features are
/// addressed by compact index into `features()`.
///
/// Cells are addressed as (a, sa, b, sb): feature a on side sa (0 = not
/// satisfied, 1 = satisfied), optionally intersected with feature b on side
/// sb. Pass a = -1 for the whole view and b = -1 for a single-feature cell.
/// Only the satisfied/satisfied entries are stored; the other three
/// quadrants follow by inclusion-exclusion.
class FrequencyCounts {
public:
    FrequencyCounts(const DataView& view, const ObjectiveConfig& config, const std::vector<bool>& allowed = {});

    const std::vector<int>& features() const { return features_; }
    int num_features() const { return static_cast<int>(features_.size()); }
    int feature_id(int a) const { return features_[static_cast<std::size_t>(a)]; }
    Task task() const { return task_; }

    std::size_t size(int a = -1, int sa = 0, int b = -1, int sb = 0) const;
    LeafCost leaf(int a = -1, int sa = 0, int b = -1, int sb = 0) const;

    /// Both sides of feature b are non-empty inside cell (a, sa) (or the whole view).
    bool splits(int b, int a = -1, int sa = 0) const
    {
        const std::size_t in = size(a, sa, b, 1), all = size(a, sa);
        return in > 0 && in < all;
    }

    /// Class-k sample count in a cell (classification only).
    int class_count(int k, int a = -1, int sa = 0, int b = -1, int sb = 0) const;

private:
    struct Stat {
        double n = 0, sum = 0, sumsq = 0;
    };
    Stat reg_cell(int a, int sa, int b, int sb) const;
    std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * features_.size() + static_cast<std::size_t>(b); }

    Task task_;
    int num_classes_ = 0;
    std::size_t dataset_size_ = 0;
    std::vector<int> features_;
    // classification: [k][a][b], diagonal holds singles
    std::vector<int> class_total_;
    std::vector<int> class_pair_;
    // regression: [a][b], diagonal holds singles
    Stat reg_total_;
    std::vector<Stat> reg_pair_;
};

/// One depth-two tree in compact form. `root` < 0 is the single leaf;
/// `left`/`right` hold the second feature under each side of the root
/// (-1 = leaf). All indices are compact FrequencyCounts indices.
struct D2Candidate {
    double value = 0.0;
    int root = -1;
    int left = -1;
    int right = -1;

    int branching_nodes() const { return root < 0 ? 0 : 1 + (left >= 0) + (right >= 0); }
};

/// Accept values in (lo, hi] up to the equality tolerance.
struct ValueWindow {
    double lo = -kInfinity;
    double hi = kInfinity;
    double tol = 1e-9;

    bool admits(double v) const { return v > lo + tol && v <= hi + tol; }
    bool below_hi(double v) const { return v <= hi + tol; }
};

struct D2Options {
    double lambda = 0.0;
    bool ignore_trivial_extensions = false;
};

void calc_leaf_sol(const FrequencyCounts& counts, const ValueWindow& w, std::vector<D2Candidate>& out);
void calc_one_node_sols(const FrequencyCounts& counts, const D2Options& o, const ValueWindow& w,
                        std::vector<D2Candidate>& out);
void calc_two_node_sols(const FrequencyCounts& counts, const D2Options& o, const ValueWindow& w,
                        std::vector<D2Candidate>& out);
/// `break_early` = false disables the sorted-sweep cutoff (for testing it).
void calc_three_node_sols(const FrequencyCounts& counts, const D2Options& o, const ValueWindow& w,
                          std::vector<D2Candidate>& out, bool break_early = true);

/// All trees of depth <= `depth` in the window, sorted by
/// (value, root, left, right) with leaf/-1 first.
std::vector<D2Candidate> generate_depth2(const FrequencyCounts& counts, int depth, const D2Options& o,
                                         const ValueWindow& w);

/// Value of the stump with feature b under cell (a, sa) (a = -1: whole view).
double stump_value(const FrequencyCounts& counts, double lambda, int b, int a = -1, int sa = 0);
/// Stump is a trivial extension (both leaves forced to the same label).
bool stump_trivial(const FrequencyCounts& counts, int b, int a = -1, int sa = 0);

struct D2Bound {
    double hat_ub = 0.0;
    double true_ub = 0.0;
};

/// hat = min(leaf + lambda, true_ub): the leaf and every one-split tree first.
D2Bound init_d2_bound(double leaf_value, double lambda, double true_ub);
/// Snap to true_ub when within 20% of it, otherwise close half the gap.
D2Bound relax_d2_bound(D2Bound bound);

} // namespace rashomon

#endif
