#include "rashomon/enumerate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace rashomon {

// ---------------------------------------------------------------------------
// LazyPairMerger

LazyPairMerger::LazyPairMerger(double lambda, double tolerance, double seed_key) : lambda_{lambda}, tol_{tolerance}
{
    heap_.push({seed_key, 0, 0, false});
    visit(0, 0);
}

bool LazyPairMerger::visit(std::uint32_t l, std::uint32_t r)
{
    return visited_.insert((std::uint64_t{l} << 32) | r).second;
}

void LazyPairMerger::resolve_top(MergeSource& left, MergeSource& right, double limit)
{
    while (!heap_.empty() && !heap_.top().resolved && heap_.top().value <= limit) {
        Candidate c = heap_.top();
        heap_.pop();
        const auto lv = left.value_at(c.left);
        const auto rv = lv ? right.value_at(c.right) : std::nullopt;
        if (!lv || !rv) {
            blocked_.push_back(c);
            continue;
        }
        c.value = combine(*lv, *rv, lambda_);
        c.resolved = true;
        heap_.push(c);
    }
}

double LazyPairMerger::next(MergeSource& left, MergeSource& right, double limit)
{
    resolve_top(left, right, limit);
    return heap_.empty() ? kInfinity : heap_.top().value;
}

std::vector<LazyPairMerger::Pair> LazyPairMerger::pop_equal(MergeSource& left, MergeSource& right, double value)
{
    const double limit = value + tol_;
    std::vector<Candidate> same;
    for (;;) {
        resolve_top(left, right, limit);
        if (heap_.empty() || heap_.top().value > limit) break;
        same.push_back(heap_.top());
        heap_.pop();
    }
    for (std::size_t i = 0; i < same.size(); ++i) {
        const Candidate c = same[i];
        const std::array<std::pair<std::uint32_t, std::uint32_t>, 2> succ{
                {{c.left + 1, c.right}, {c.left, c.right + 1}}};
        for (const auto& [l, r] : succ) {
            if (!visit(l, r)) continue;
            const auto lv = left.value_at(l);
            const auto rv = lv ? right.value_at(r) : std::nullopt;
            if (!lv || !rv) {
                blocked_.push_back({c.value, l, r, false});
                continue;
            }
            const Candidate n{combine(*lv, *rv, lambda_), l, r, true};
            if (n.value <= limit)
                same.push_back(n);
            else
                heap_.push(n);
        }
    }
    std::vector<Pair> out;
    out.reserve(same.size());
    for (const auto& c : same) out.push_back({c.left, c.right});
    std::sort(out.begin(), out.end(),
              [](const Pair& a, const Pair& b) { return std::tie(a.left, a.right) < std::tie(b.left, b.right); });
    return out;
}

void LazyPairMerger::revive()
{
    for (const auto& c : blocked_) heap_.push(c);
    blocked_.clear();
}

// ---------------------------------------------------------------------------
// SearchNode

SearchNode::SearchNode(Engine& engine, DataView view, int depth, double ub)
    : engine_{engine}, view_{std::move(view)}, depth_{depth}, ub_{ub}
{
}

const SolutionGroup* SearchNode::get_nth(std::size_t index, double bound)
{
    if (bound > ub_) {
        ub_ = bound;
        on_raise();
    }
    while (ssl_.size() <= index) {
        ++engine_.stats().produce_calls;
        const SolutionGroup* g = produce(bound);
        if (!g) return nullptr;
        ssl_.push_back(g);
    }
    const SolutionGroup* g = ssl_[index];
    return within(g->value(), bound, engine_.objective()) ? g : nullptr;
}

namespace {

bool same_default_label(const SolutionGroup& l, const SolutionGroup& r)
{
    return l.leaf().cost.prediction == r.leaf().cost.prediction;
}

/// Flags for combining two child groups when trivial extensions are ignored.
/// Returns false when the combination holds no tree at all.
bool leaf_pair_flags(PairRef& p, Task task, bool ignore_trivial)
{
    if (!ignore_trivial || !p.left->has_leaf() || !p.right->has_leaf()) return true;
    if (is_trivial_leaf_pair(p.left->leaf().cost, p.right->leaf().cost, task))
        p.skip_leaf_pair = true;
    else if (task == Task::classification && same_default_label(*p.left, *p.right))
        p.resolve_labels = true;
    return p.count() > 0;
}

// ---------------------------------------------------------------------------
// Generic node: one leaf helper plus one merger per splitting feature.

class RecursiveNode final : public SearchNode {
public:
    using SearchNode::SearchNode;

protected:
    const SolutionGroup* produce(double bound) override;
    void on_raise() override
    {
        for (auto& h : helpers_) h->merger.revive();
    }

private:
    struct Helper;

    class Side final : public MergeSource {
    public:
        Side(RecursiveNode& owner, Helper& helper, bool left) : owner_{owner}, helper_{helper}, left_{left} {}
        std::optional<double> value_at(std::size_t index) override
        {
            const SolutionGroup* g = owner_.child_group(helper_, left_, index);
            if (!g) return std::nullopt;
            return g->value();
        }

    private:
        RecursiveNode& owner_;
        Helper& helper_;
        bool left_;
    };

    struct Helper {
        Helper(RecursiveNode& owner, int f, DataView l, DataView r, double ol, double orr, double lambda, double tol)
            : feature{f}, left_view{std::move(l)}, right_view{std::move(r)}, opt_left{ol}, opt_right{orr},
              merger{lambda, tol, combine(ol, orr, lambda)}, left_side{owner, *this, true},
              right_side{owner, *this, false}
        {
        }
        int feature;
        DataView left_view, right_view;
        double opt_left, opt_right;
        SearchNode* left = nullptr;
        SearchNode* right = nullptr;
        LazyPairMerger merger;
        Side left_side, right_side;
    };

    void init();
    const SolutionGroup* child_group(Helper& h, bool left, std::size_t index);

    bool initialized_ = false;
    LeafCost leaf_;
    bool leaf_pending_ = true;
    std::vector<std::unique_ptr<Helper>> helpers_;
};

void RecursiveNode::init()
{
    initialized_ = true;
    const auto& cfg = engine_.objective();
    leaf_ = leaf_cost(view_, cfg);
    if (depth_ == 0) return;
    const auto& allowed = engine_.config().allowed_features;
    for (std::size_t f = 0; f < engine_.data().num_features(); ++f) {
        if (!allowed.empty() && !allowed[f]) continue;
        auto [lv, rv] = split(view_, f);
        if (lv.empty() || rv.empty()) continue;
        const double ol = engine_.optimal_value(lv, depth_ - 1);
        const double orr = engine_.optimal_value(rv, depth_ - 1);
        helpers_.push_back(std::make_unique<Helper>(*this, static_cast<int>(f), std::move(lv), std::move(rv), ol,
                                                    orr, cfg.lambda, cfg.tolerance));
    }
}

const SolutionGroup* RecursiveNode::child_group(Helper& h, bool left, std::size_t index)
{
    const double lambda = engine_.objective().lambda;
    const double bound = child_upper_bound(ub_, left ? h.opt_right : h.opt_left, lambda);
    SearchNode*& child = left ? h.left : h.right;
    if (!child) child = engine_.node(left ? h.left_view : h.right_view, depth_ - 1, bound);
    return child->get_nth(index, bound);
}

const SolutionGroup* RecursiveNode::produce(double bound)
{
    if (!initialized_) init();
    const auto& cfg = engine_.objective();
    bound = std::min(bound, ub_);
    const double limit = bound + cfg.tolerance;
    for (;;) {
        double v = leaf_pending_ ? leaf_.value : kInfinity;
        for (auto& h : helpers_) v = std::min(v, h->merger.next(h->left_side, h->right_side, limit));
        if (!(v <= limit)) return nullptr;

        const double group_limit = v + cfg.tolerance;
        std::vector<GroupEntry> entries;
        if (leaf_pending_ && leaf_.value <= group_limit) {
            leaf_pending_ = false;
            GroupEntry e;
            e.leaf.cost = leaf_;
            e.leaf.base = &view_.members();
            entries.push_back(std::move(e));
        }
        for (auto& h : helpers_) {
            if (h->merger.next(h->left_side, h->right_side, group_limit) > group_limit) continue;
            GroupEntry e;
            e.feature = h->feature;
            for (const auto& p : h->merger.pop_equal(h->left_side, h->right_side, v)) {
                PairRef ref;
                ref.left = child_group(*h, true, p.left);
                ref.right = child_group(*h, false, p.right);
                if (!ref.left || !ref.right) throw std::logic_error("merged pair lost its children");
                if (leaf_pair_flags(ref, cfg.task, engine_.config().ignore_trivial_extensions))
                    e.pairs.push_back(ref);
            }
            if (!e.pairs.empty()) entries.push_back(std::move(e));
        }
        if (!entries.empty()) return engine_.add_group(v, std::move(entries));
    }
}

// ---------------------------------------------------------------------------
// Depth-two node: trees generated from frequency counts under a gradually
// relaxed bound.

class Depth2Node final : public SearchNode {
public:
    using SearchNode::SearchNode;

protected:
    const SolutionGroup* produce(double bound) override;

private:
    void generate(double lo, double hi);
    const SolutionGroup* build(std::size_t end);
    const SolutionGroup* leaf_group(int a, int sa, int b = -1, int sb = 0);
    const SolutionGroup* stump_group(int a, int sa, int b);

    std::unique_ptr<FrequencyCounts> counts_;
    D2Bound bound_;
    std::vector<D2Candidate> pending_;
    std::size_t pos_ = 0;
    std::map<std::array<int, 4>, const SolutionGroup*> leaves_;
    std::map<std::array<int, 3>, const SolutionGroup*> stumps_;
};

void Depth2Node::generate(double lo, double hi)
{
    ++engine_.stats().depth2_generations;
    const auto& cfg = engine_.objective();
    pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
    const auto fresh = generate_depth2(*counts_, depth_, {cfg.lambda, engine_.config().ignore_trivial_extensions},
                                       {lo, hi, cfg.tolerance});
    pending_.insert(pending_.end(), fresh.begin(), fresh.end());
}

const SolutionGroup* Depth2Node::produce(double bound)
{
    const auto& cfg = engine_.objective();
    if (!counts_) {
        counts_ = std::make_unique<FrequencyCounts>(view_, cfg, engine_.config().allowed_features);
        bound_ = init_d2_bound(counts_->leaf().value, cfg.lambda, ub_);
        generate(-kInfinity, bound_.hat_ub);
    }
    bound = std::min(bound, ub_);
    for (;;) {
        if (pos_ < pending_.size()) {
            const double rep = pending_[pos_].value;
            if (!within(rep, bound, cfg)) return nullptr;
            if (rep <= bound_.hat_ub || bound_.hat_ub >= ub_) {
                std::size_t end = pos_;
                while (end < pending_.size() && pending_[end].value <= rep + cfg.tolerance) ++end;
                return build(end);
            }
        } else if (bound_.hat_ub >= ub_ || bound_.hat_ub >= bound) {
            return nullptr;
        }
        const double old = bound_.hat_ub;
        bound_.true_ub = ub_;
        bound_ = relax_d2_bound(bound_);
        generate(old, bound_.hat_ub);
    }
}

const SolutionGroup* Depth2Node::leaf_group(int a, int sa, int b, int sb)
{
    const std::array<int, 4> key{a, sa, b, sb};
    auto it = leaves_.find(key);
    if (it != leaves_.end()) return it->second;
    GroupEntry e;
    e.leaf.cost = counts_->leaf(a, sa, b, sb);
    e.leaf.base = &view_.members();
    if (a >= 0) {
        e.leaf.cond_feature[0] = counts_->feature_id(a);
        e.leaf.cond_side[0] = sa;
    }
    if (b >= 0) {
        e.leaf.cond_feature[1] = counts_->feature_id(b);
        e.leaf.cond_side[1] = sb;
    }
    const double v = e.leaf.cost.value;
    std::vector<GroupEntry> entries;
    entries.push_back(std::move(e));
    const SolutionGroup* g = engine_.add_group(v, std::move(entries));
    leaves_.emplace(key, g);
    return g;
}

const SolutionGroup* Depth2Node::stump_group(int a, int sa, int b)
{
    const std::array<int, 3> key{a, sa, b};
    auto it = stumps_.find(key);
    if (it != stumps_.end()) return it->second;
    const auto& cfg = engine_.objective();
    PairRef p;
    p.left = leaf_group(a, sa, b, 0);
    p.right = leaf_group(a, sa, b, 1);
    if (!leaf_pair_flags(p, cfg.task, engine_.config().ignore_trivial_extensions))
        throw std::logic_error("trivial stump reached group construction");
    GroupEntry e;
    e.feature = counts_->feature_id(b);
    e.pairs.push_back(p);
    std::vector<GroupEntry> entries;
    entries.push_back(std::move(e));
    const SolutionGroup* g = engine_.add_group(stump_value(*counts_, cfg.lambda, b, a, sa), std::move(entries));
    stumps_.emplace(key, g);
    return g;
}

const SolutionGroup* Depth2Node::build(std::size_t end)
{
    const auto& cfg = engine_.objective();
    const double rep = pending_[pos_].value;
    std::vector<D2Candidate> members(pending_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                     pending_.begin() + static_cast<std::ptrdiff_t>(end));
    pos_ = end;
    std::sort(members.begin(), members.end(), [](const D2Candidate& x, const D2Candidate& y) {
        return std::tie(x.root, x.left, x.right) < std::tie(y.root, y.left, y.right);
    });
    std::vector<GroupEntry> entries;
    for (const auto& c : members) {
        if (c.root < 0) {
            GroupEntry e;
            e.leaf.cost = counts_->leaf();
            e.leaf.base = &view_.members();
            entries.push_back(std::move(e));
            continue;
        }
        const int fid = counts_->feature_id(c.root);
        if (entries.empty() || entries.back().feature != fid) {
            GroupEntry e;
            e.feature = fid;
            entries.push_back(std::move(e));
        }
        PairRef p;
        p.left = c.left < 0 ? leaf_group(c.root, 0) : stump_group(c.root, 0, c.left);
        p.right = c.right < 0 ? leaf_group(c.root, 1) : stump_group(c.root, 1, c.right);
        if (!leaf_pair_flags(p, cfg.task, engine_.config().ignore_trivial_extensions))
            throw std::logic_error("trivial stump reached group construction");
        entries.back().pairs.push_back(p);
    }
    return engine_.add_group(rep, std::move(entries));
}

} // namespace

// ---------------------------------------------------------------------------
// Engine

Engine::Engine(const BinaryDataset& data, const EnumerationConfig& config)
    : data_{data}, config_{config}, solver_{data, config.objective, config.allowed_features}
{
    if (config_.depth < 0) throw std::invalid_argument("depth must be >= 0");
}

Engine::~Engine() = default;

SearchNode* Engine::node(const DataView& view, int depth, double ub)
{
    std::unique_ptr<SearchNode> fresh;
    auto make = [&]() -> std::unique_ptr<SearchNode> {
        ++stats_.nodes_created;
        if (depth <= 2 && config_.use_depth2) return std::make_unique<Depth2Node>(*this, view, depth, ub);
        return std::make_unique<RecursiveNode>(*this, view, depth, ub);
    };
    if (!config_.use_cache) {
        uncached_.push_back(make());
        return uncached_.back().get();
    }
    CacheKey key = fingerprint(view, depth);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        ++stats_.cache_hits;
        return it->second.get();
    }
    return cache_.emplace(std::move(key), make()).first->second.get();
}

double Engine::optimal_value(const DataView& view, int depth) { return solver_.solve(view, depth).value; }

const SolutionGroup* Engine::add_group(double value, std::vector<GroupEntry> entries)
{
    ++stats_.groups_built;
    groups_.emplace_back(value, std::move(entries));
    return &groups_.back();
}

// ---------------------------------------------------------------------------
// RashomonEnumerator

namespace {

EnumerationConfig validated(EnumerationConfig c, const BinaryDataset& data)
{
    c.objective.validate();
    if (c.objective.task != data.task()) throw std::invalid_argument("objective task does not match dataset");
    if (c.depth < 0) throw std::invalid_argument("depth must be >= 0");
    if (c.epsilon && !(*c.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    if (c.theta && !std::isfinite(*c.theta)) throw std::invalid_argument("theta must be finite");
    if (!c.allowed_features.empty() && c.allowed_features.size() != data.num_features())
        throw std::invalid_argument("allowed-feature mask has wrong length");
    return c;
}

} // namespace

RashomonEnumerator::RashomonEnumerator(const BinaryDataset& data, EnumerationConfig config)
    : engine_{data, validated(std::move(config), data)}
{
    const auto& cfg = engine_.config();
    const OptSolution opt = engine_.solver().solve_root(cfg.depth);
    optimal_cost_ = total_cost(opt.value, cfg.objective.lambda);
    optimal_tree_ = opt.tree;
    theta_ = cfg.theta ? *cfg.theta : rashomon_bound(optimal_cost_, cfg.epsilon.value_or(kDefaultEpsilon)).theta;
    root_ = engine_.node(DataView::all(data), cfg.depth, theta_ - cfg.objective.lambda);
}

std::optional<EmittedGroup> RashomonEnumerator::next()
{
    if (exhausted_) return std::nullopt;
    const double lambda = engine_.objective().lambda;
    const SolutionGroup* g = root_->get_nth(index_, theta_ - lambda);
    if (!g) {
        exhausted_ = true;
        return std::nullopt;
    }
    ++index_;
    trees_ += g->count();
    return EmittedGroup{g->value(), total_cost(g->value(), lambda), g->count(), g};
}

std::vector<EmittedGroup> RashomonEnumerator::run(const std::optional<BigCount>& max_trees)
{
    std::vector<EmittedGroup> out;
    while (!max_trees || trees_ < *max_trees) {
        auto g = next();
        if (!g) break;
        out.push_back(std::move(*g));
    }
    return out;
}

} // namespace rashomon
