#include "rashomon/depth2.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace rashomon {

FrequencyCounts::FrequencyCounts(const DataView& view, const ObjectiveConfig& config, const std::vector<bool>& allowed)
    : task_{config.task}
{
    const auto& data = view.dataset();
    dataset_size_ = data.num_samples();
    for (std::size_t f = 0; f < data.num_features(); ++f)
        if (allowed.empty() || allowed[f]) features_.push_back(static_cast<int>(f));
    const std::size_t nf = features_.size();

    if (task_ == Task::classification) {
        num_classes_ = data.num_classes();
        class_total_.assign(static_cast<std::size_t>(num_classes_), 0);
        class_pair_.assign(static_cast<std::size_t>(num_classes_) * nf * nf, 0);
        for (int k = 0; k < num_classes_; ++k) {
            const Bitset cls = view.members() & data.class_members(k);
            class_total_[static_cast<std::size_t>(k)] = static_cast<int>(cls.count());
            int* table = class_pair_.data() + static_cast<std::size_t>(k) * nf * nf;
            for (std::size_t a = 0; a < nf; ++a) {
                const Bitset& ca = data.column(static_cast<std::size_t>(features_[a]));
                table[a * nf + a] = static_cast<int>(cls.count_and(ca));
                for (std::size_t b = a + 1; b < nf; ++b) {
                    const int c = static_cast<int>(
                            cls.count_and(ca, data.column(static_cast<std::size_t>(features_[b]))));
                    table[a * nf + b] = c;
                    table[b * nf + a] = c;
                }
            }
        }
        return;
    }

    // Regression: walk the samples of the view and their satisfied features.
    reg_pair_.assign(nf * nf, Stat{});
    const auto& y = data.labels().values;
    std::vector<std::size_t> on;
    on.reserve(nf);
    view.members().for_each([&](std::size_t i) {
        const double v = y[i], v2 = v * v;
        reg_total_.n += 1;
        reg_total_.sum += v;
        reg_total_.sumsq += v2;
        on.clear();
        for (std::size_t a = 0; a < nf; ++a)
            if (data.feature(i, static_cast<std::size_t>(features_[a]))) on.push_back(a);
        for (std::size_t x = 0; x < on.size(); ++x) {
            for (std::size_t z = x; z < on.size(); ++z) {
                Stat& s = reg_pair_[on[x] * nf + on[z]];
                s.n += 1;
                s.sum += v;
                s.sumsq += v2;
            }
        }
    });
    for (std::size_t a = 0; a < nf; ++a)
        for (std::size_t b = a + 1; b < nf; ++b) reg_pair_[b * nf + a] = reg_pair_[a * nf + b];
}

int FrequencyCounts::class_count(int k, int a, int sa, int b, int sb) const
{
    const std::size_t nf = features_.size();
    const int total = class_total_[static_cast<std::size_t>(k)];
    if (a < 0 && b >= 0) std::swap(a, b), std::swap(sa, sb);
    if (a < 0) return total;
    const int* table = class_pair_.data() + static_cast<std::size_t>(k) * nf * nf;
    const int qa = table[idx(a, a)];
    if (b < 0) return sa ? qa : total - qa;
    const int qb = table[idx(b, b)];
    const int qab = table[idx(a, b)];
    if (sa && sb) return qab;
    if (sa) return qa - qab;
    if (sb) return qb - qab;
    return total - qa - qb + qab;
}

FrequencyCounts::Stat FrequencyCounts::reg_cell(int a, int sa, int b, int sb) const
{
    if (a < 0 && b >= 0) std::swap(a, b), std::swap(sa, sb);
    if (a < 0) return reg_total_;
    const Stat& sa_ = reg_pair_[idx(a, a)];
    auto lin = [](const Stat& x, double cx, const Stat& y, double cy, const Stat& z, double cz, const Stat& w,
                  double cw) {
        return Stat{cx * x.n + cy * y.n + cz * z.n + cw * w.n, cx * x.sum + cy * y.sum + cz * z.sum + cw * w.sum,
                    cx * x.sumsq + cy * y.sumsq + cz * z.sumsq + cw * w.sumsq};
    };
    const Stat zero{};
    if (b < 0) return sa ? sa_ : lin(reg_total_, 1, sa_, -1, zero, 0, zero, 0);
    const Stat& sb_ = reg_pair_[idx(b, b)];
    const Stat& sab = reg_pair_[idx(a, b)];
    if (sa && sb) return sab;
    if (sa) return lin(sa_, 1, sab, -1, zero, 0, zero, 0);
    if (sb) return lin(sb_, 1, sab, -1, zero, 0, zero, 0);
    return lin(reg_total_, 1, sa_, -1, sb_, -1, sab, 1);
}

std::size_t FrequencyCounts::size(int a, int sa, int b, int sb) const
{
    if (task_ == Task::classification) {
        int n = 0;
        for (int k = 0; k < num_classes_; ++k) n += class_count(k, a, sa, b, sb);
        return static_cast<std::size_t>(n);
    }
    return static_cast<std::size_t>(reg_cell(a, sa, b, sb).n + 0.5);
}

LeafCost FrequencyCounts::leaf(int a, int sa, int b, int sb) const
{
    if (task_ == Task::classification) {
        int counts[64];
        for (int k = 0; k < num_classes_; ++k) counts[k] = class_count(k, a, sa, b, sb);
        return classification_leaf(counts, num_classes_, dataset_size_);
    }
    const Stat s = reg_cell(a, sa, b, sb);
    return regression_leaf(s.n, s.sum, s.sumsq);
}

double stump_value(const FrequencyCounts& c, double lambda, int b, int a, int sa)
{
    if (a < 0) return combine(c.leaf(b, 0).value, c.leaf(b, 1).value, lambda);
    return combine(c.leaf(a, sa, b, 0).value, c.leaf(a, sa, b, 1).value, lambda);
}

bool stump_trivial(const FrequencyCounts& c, int b, int a, int sa)
{
    if (a < 0) return is_trivial_leaf_pair(c.leaf(b, 0), c.leaf(b, 1), c.task());
    return is_trivial_leaf_pair(c.leaf(a, sa, b, 0), c.leaf(a, sa, b, 1), c.task());
}

void calc_leaf_sol(const FrequencyCounts& counts, const ValueWindow& w, std::vector<D2Candidate>& out)
{
    const double v = counts.leaf().value;
    if (w.admits(v)) out.push_back({v, -1, -1, -1});
}

void calc_one_node_sols(const FrequencyCounts& counts, const D2Options& o, const ValueWindow& w,
                        std::vector<D2Candidate>& out)
{
    for (int a = 0; a < counts.num_features(); ++a) {
        if (!counts.splits(a)) continue;
        if (o.ignore_trivial_extensions && stump_trivial(counts, a)) continue;
        const double v = stump_value(counts, o.lambda, a);
        if (w.admits(v)) out.push_back({v, a, -1, -1});
    }
}

namespace {

struct Inner {
    double value;
    int feature;
};

/// Bounded one-split subtrees under side `sa` of root feature `a`.
std::vector<Inner> inner_stumps(const FrequencyCounts& counts, const D2Options& o, const ValueWindow& w, int a,
                                int sa)
{
    std::vector<Inner> out;
    for (int b = 0; b < counts.num_features(); ++b) {
        if (b == a || !counts.splits(b, a, sa)) continue;
        if (o.ignore_trivial_extensions && stump_trivial(counts, b, a, sa)) continue;
        const double v = stump_value(counts, o.lambda, b, a, sa);
        if (w.below_hi(v)) out.push_back({v, b});
    }
    return out;
}

} // namespace

void calc_two_node_sols(const FrequencyCounts& counts, const D2Options& o, const ValueWindow& w,
                        std::vector<D2Candidate>& out)
{
    for (int a = 0; a < counts.num_features(); ++a) {
        if (!counts.splits(a)) continue;
        const double left_leaf = counts.leaf(a, 0).value;
        const double right_leaf = counts.leaf(a, 1).value;
        // split on the left, leaf on the right
        for (const auto& in : inner_stumps(counts, o, w, a, 0)) {
            const double v = combine(in.value, right_leaf, o.lambda);
            if (w.admits(v)) out.push_back({v, a, in.feature, -1});
        }
        // mirror image
        for (const auto& in : inner_stumps(counts, o, w, a, 1)) {
            const double v = combine(left_leaf, in.value, o.lambda);
            if (w.admits(v)) out.push_back({v, a, -1, in.feature});
        }
    }
}

void calc_three_node_sols(const FrequencyCounts& counts, const D2Options& o, const ValueWindow& w,
                          std::vector<D2Candidate>& out, bool break_early)
{
    auto by_value = [](const Inner& x, const Inner& y) {
        return std::tie(x.value, x.feature) < std::tie(y.value, y.feature);
    };
    for (int a = 0; a < counts.num_features(); ++a) {
        if (!counts.splits(a)) continue;
        auto lefts = inner_stumps(counts, o, w, a, 0);
        auto rights = inner_stumps(counts, o, w, a, 1);
        std::sort(lefts.begin(), lefts.end(), by_value);
        std::sort(rights.begin(), rights.end(), by_value);
        for (const auto& l : lefts) {
            for (const auto& r : rights) {
                const double v = combine(l.value, r.value, o.lambda);
                if (!w.below_hi(v)) {
                    if (break_early) break;
                    continue;
                }
                if (w.admits(v)) out.push_back({v, a, l.feature, r.feature});
            }
        }
    }
}

std::vector<D2Candidate> generate_depth2(const FrequencyCounts& counts, int depth, const D2Options& o,
                                         const ValueWindow& w)
{
    if (depth < 0 || depth > 2) throw std::invalid_argument("depth-two generation needs depth in [0, 2]");
    std::vector<D2Candidate> out;
    calc_leaf_sol(counts, w, out);
    if (depth >= 1) calc_one_node_sols(counts, o, w, out);
    if (depth >= 2) {
        calc_two_node_sols(counts, o, w, out);
        calc_three_node_sols(counts, o, w, out);
    }
    std::sort(out.begin(), out.end(), [](const D2Candidate& x, const D2Candidate& y) {
        return std::tie(x.value, x.root, x.left, x.right) < std::tie(y.value, y.root, y.left, y.right);
    });
    return out;
}

D2Bound init_d2_bound(double leaf_value, double lambda, double true_ub)
{
    return {std::min(leaf_value + lambda, true_ub), true_ub};
}

D2Bound relax_d2_bound(D2Bound b)
{
    if (!(b.hat_ub < b.true_ub)) throw std::logic_error("depth-two bound already at its limit");
    const double gap = b.true_ub - b.hat_ub;
    // A non-positive target cannot be approached geometrically; snap to it.
    if (gap < 0.2 * b.true_ub || b.true_ub <= 0.0)
        b.hat_ub = b.true_ub;
    else
        b.hat_ub = b.hat_ub + 0.5 * gap;
    return b;
}

} // namespace rashomon
