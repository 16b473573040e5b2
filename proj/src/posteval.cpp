#include "rashomon/posteval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rashomon {

namespace {

// Above this many child combinations a group is evaluated tree by tree.
constexpr std::size_t kMaxCombinations = std::size_t{1} << 20;
// Refuse to fall back on groups larger than this.
constexpr std::uint64_t kMaxFallbackTrees = 50'000'000;

} // namespace

SecondaryObjectiveSpec eq_opportunity_spec(const BinaryDataset& data, int sensitive_feature, int positive_class)
{
    if (data.task() != Task::classification)
        throw std::invalid_argument("equality of opportunity needs classification labels");
    if (sensitive_feature < 0 || static_cast<std::size_t>(sensitive_feature) >= data.num_features())
        throw std::out_of_range("sensitive feature out of range");
    if (positive_class < 0 || positive_class >= data.num_classes())
        throw std::out_of_range("positive class out of range");

    const Bitset& group1 = data.column(static_cast<std::size_t>(sensitive_feature));
    const Bitset& pos = data.class_members(positive_class);
    const double p1 = static_cast<double>(pos.count_and(group1));
    const double p0 = static_cast<double>(pos.count()) - p1;
    const double n = static_cast<double>(data.num_samples());

    SecondaryObjectiveSpec s;
    s.arity = 3;
    s.leaf_stat = [&data, &group1, &pos, positive_class](const DataView& view, double prediction) {
        const int k = static_cast<int>(prediction);
        const double correct = static_cast<double>(view.members().count_and(data.class_members(k)));
        const double mis = static_cast<double>(view.size()) - correct;
        if (k != positive_class) return StatTuple{mis, 0.0, 0.0};
        const Bitset tp = view.members() & pos;
        const double tp1 = static_cast<double>(tp.count_and(group1));
        const double tp0 = static_cast<double>(tp.count()) - tp1;
        return StatTuple{mis, tp0, tp1};
    };
    s.combine_stat = [](const StatTuple& a, const StatTuple& b) {
        StatTuple r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return r;
    };
    s.finalize = [p0, p1, n](const StatTuple& t) {
        if (p0 == 0.0 || p1 == 0.0)
            throw UndefinedStatistic("a sensitive group has no positive samples; discrimination is undefined");
        return std::vector<double>{1.0 - t[0] / n, t[1] / p0 - t[2] / p1};
    };
    s.minimize = [](const std::vector<double>& f) { return std::vector<double>{-f[0], std::fabs(f[1])}; };
    return s;
}

StatTuple tree_stat(const Tree& tree, const DataView& view, const SecondaryObjectiveSpec& spec)
{
    if (tree.is_leaf()) return spec.leaf_stat(view, tree.prediction());
    auto [l, r] = split(view, static_cast<std::size_t>(tree.feature()));
    return spec.combine_stat(tree_stat(tree.left(), l, spec), tree_stat(tree.right(), r, spec));
}

SecondaryEvaluator::SecondaryEvaluator(const BinaryDataset& data, SecondaryObjectiveSpec spec, std::size_t combo_cap)
    : data_{data}, spec_{std::move(spec)}, cap_{combo_cap}
{
    if (!spec_.leaf_stat || !spec_.combine_stat) throw std::invalid_argument("secondary objective is incomplete");
}

void SecondaryEvaluator::check(const StatTuple& t) const
{
    if (spec_.arity && t.size() != spec_.arity) throw std::invalid_argument("statistic arity mismatch");
}

StatTuple SecondaryEvaluator::leaf_tuple(const LeafInfo& leaf, double prediction)
{
    StatTuple t = spec_.leaf_stat(DataView(data_, leaf.members(data_)), prediction);
    check(t);
    return t;
}

const SecondaryEvaluator::StatSet& SecondaryEvaluator::stat_set(const SolutionGroup& g)
{
    auto it = memo_.find(&g);
    if (it != memo_.end()) return it->second;

    StatSet s;
    BigCount offset = 0;
    for (const auto& e : g.entries()) {
        if (s.overflow) break;
        if (e.is_leaf()) {
            s.leaf = leaf_tuple(e.leaf, e.leaf.cost.prediction);
            offset += 1;
            continue;
        }
        for (const auto& p : e.pairs) {
            const StatSet& L = stat_set(*p.left);
            const StatSet& R = stat_set(*p.right);
            if (L.overflow || R.overflow ||
                (L.rest.size() + 1) * (R.rest.size() + 1) > kMaxCombinations) {
                s.overflow = true;
                break;
            }
            struct Item {
                const StatTuple* t;
                const BigCount* rank;
                bool leaf;
            };
            static const BigCount zero = 0;
            auto items = [](const StatSet& x) {
                std::vector<Item> v;
                if (x.leaf) v.push_back({&*x.leaf, &zero, true});
                for (const auto& [t, r] : x.rest) v.push_back({&t, &r, false});
                return v;
            };
            const auto li = items(L), ri = items(R);
            const BigCount& cr = p.right->count();
            for (const auto& a : li) {
                for (const auto& b : ri) {
                    StatTuple t;
                    if (a.leaf && b.leaf && p.skip_leaf_pair) continue;
                    if (a.leaf && b.leaf && p.resolve_labels) {
                        const auto [lp, rp] = resolve_leaf_pair(p.left->leaf().cost, p.right->leaf().cost,
                                                                Task::classification);
                        t = spec_.combine_stat(leaf_tuple(p.left->leaf(), lp), leaf_tuple(p.right->leaf(), rp));
                    } else {
                        t = spec_.combine_stat(*a.t, *b.t);
                    }
                    check(t);
                    BigCount rank = offset + *a.rank * cr + *b.rank;
                    if (p.skip_leaf_pair) rank -= 1;
                    auto [pos, fresh] = s.rest.try_emplace(std::move(t), rank);
                    if (!fresh && rank < pos->second) pos->second = rank;
                }
            }
            if (s.rest.size() > cap_) {
                s.overflow = true;
                break;
            }
            offset += p.count();
        }
    }
    if (s.overflow) {
        s.rest.clear();
        s.leaf.reset();
    }
    return memo_.emplace(&g, std::move(s)).first->second;
}

std::vector<EvaluatedTuple> SecondaryEvaluator::evaluate(const EmittedGroup& eg, std::size_t group_index)
{
    const SolutionGroup& g = *eg.group;
    std::vector<EvaluatedTuple> out;
    const StatSet& s = stat_set(g);
    if (!s.overflow) {
        if (s.leaf) out.push_back({group_index, eg.total_cost, *s.leaf, 0, {}});
        for (const auto& [t, r] : s.rest)
            if (!s.leaf || t != *s.leaf) out.push_back({group_index, eg.total_cost, t, r, {}});
    } else {
        ++fallbacks_;
        if (g.count() > kMaxFallbackTrees) throw std::runtime_error("group too large for per-tree evaluation");
        std::map<StatTuple, BigCount> seen;
        const DataView all = DataView::all(data_);
        BigCount rank = 0;
        for_each_tree(g, g.count(), [&](const Tree& t) {
            StatTuple st = tree_stat(t, all, spec_);
            check(st);
            seen.try_emplace(std::move(st), rank);
            rank += 1;
            return true;
        });
        for (const auto& [t, r] : seen) out.push_back({group_index, eg.total_cost, t, r, {}});
    }
    std::sort(out.begin(), out.end(), [](const EvaluatedTuple& a, const EvaluatedTuple& b) { return a.rank < b.rank; });
    for (auto& e : out) e.witness = tree_at(g, e.rank);
    return out;
}

std::vector<EvaluatedTuple> evaluate_secondary(const BinaryDataset& data, const std::vector<EmittedGroup>& groups,
                                               const SecondaryObjectiveSpec& spec, std::size_t combo_cap)
{
    SecondaryEvaluator ev(data, spec, combo_cap);
    std::vector<EvaluatedTuple> out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        auto part = ev.evaluate(groups[i], i);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("coordinate arity mismatch");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

bool ParetoFront::add(ParetoPoint p)
{
    for (const auto& q : points_)
        if (q.coordinates == p.coordinates || dominates(q.coordinates, p.coordinates)) return false;
    std::erase_if(points_, [&](const ParetoPoint& q) { return dominates(p.coordinates, q.coordinates); });
    points_.push_back(std::move(p));
    return true;
}

std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points)
{
    ParetoFront f;
    for (const auto& p : points) f.add(p);
    return f.points();
}

std::optional<ConstrainedResult> batched_constrained_search(
        const BinaryDataset& data, const EnumerationConfig& config, const SecondaryObjectiveSpec& spec,
        const std::function<bool(const std::vector<double>&)>& constraint, std::uint64_t batch)
{
    if (batch == 0) throw std::invalid_argument("batch must be >= 1");
    RashomonEnumerator e(data, config);
    SecondaryEvaluator ev(data, spec);
    std::size_t index = 0;
    for (;;) {
        const BigCount target = e.trees_emitted() + batch;
        const auto groups = e.run(target);
        if (groups.empty()) return std::nullopt;
        for (const auto& g : groups) {
            for (auto& t : ev.evaluate(g, index)) {
                auto f = spec.finalize(t.stat);
                if (constraint(f)) return ConstrainedResult{t.witness, g.total_cost, std::move(f), e.trees_emitted()};
            }
            ++index;
        }
    }
}

} // namespace rashomon
