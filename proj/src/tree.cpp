#include "rashomon/tree.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rashomon {

Tree Tree::leaf(double prediction)
{
    auto n = std::make_shared<TreeNode>();
    n->prediction = prediction;
    return Tree(std::move(n));
}

Tree Tree::split(int feature, Tree left, Tree right)
{
    if (feature < 0 || !left.valid() || !right.valid()) throw std::invalid_argument("malformed split");
    auto n = std::make_shared<TreeNode>();
    n->feature = feature;
    n->left = std::move(left);
    n->right = std::move(right);
    return Tree(std::move(n));
}

bool Tree::is_leaf() const { return root_->feature < 0; }
int Tree::feature() const { return root_->feature; }
double Tree::prediction() const { return root_->prediction; }
const Tree& Tree::left() const { return root_->left; }
const Tree& Tree::right() const { return root_->right; }

int Tree::num_leaves() const { return is_leaf() ? 1 : left().num_leaves() + right().num_leaves(); }
int Tree::depth() const { return is_leaf() ? 0 : 1 + std::max(left().depth(), right().depth()); }

double Tree::predict(std::span<const std::uint8_t> features) const
{
    const TreeNode* n = root_.get();
    while (n->feature >= 0) {
        if (static_cast<std::size_t>(n->feature) >= features.size())
            throw std::invalid_argument("feature vector too short for tree");
        n = features[static_cast<std::size_t>(n->feature)] ? n->right.root_.get() : n->left.root_.get();
    }
    return n->prediction;
}

double Tree::predict(const BinaryDataset& data, std::size_t sample) const
{
    const TreeNode* n = root_.get();
    while (n->feature >= 0)
        n = data.feature(sample, static_cast<std::size_t>(n->feature)) ? n->right.root_.get()
                                                                          : n->left.root_.get();
    return n->prediction;
}

bool operator==(const Tree& a, const Tree& b)
{
    if (a.root_ == b.root_) return true;
    if (!a.valid() || !b.valid()) return false;
    if (a.feature() != b.feature()) return false;
    if (a.is_leaf()) return a.prediction() == b.prediction();
    return a.left() == b.left() && a.right() == b.right();
}

namespace {

void append_number(std::string& out, double v) { out += format_number(v); }

void serialize_into(std::string& out, const Tree& t)
{
    if (t.is_leaf()) {
        out += "{\"predict\":";
        append_number(out, t.prediction());
        out += '}';
        return;
    }
    out += "{\"feature\":";
    out += std::to_string(t.feature());
    out += ",\"left\":";
    serialize_into(out, t.left());
    out += ",\"right\":";
    serialize_into(out, t.right());
    out += '}';
}

} // namespace

std::string format_number(double v)
{
    char buf[40];
    if (std::floor(v) == v && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

Tree from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw std::invalid_argument("tree node must be an object");
    if (j.contains("predict")) return Tree::leaf(j.at("predict").get<double>());
    return Tree::split(j.at("feature").get<int>(), from_json(j.at("left")), from_json(j.at("right")));
}

} // namespace

std::string serialize_tree(const Tree& tree)
{
    std::string out;
    serialize_into(out, tree);
    return out;
}

Tree parse_tree(std::string_view json)
{
    try {
        return from_json(nlohmann::json::parse(json));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed tree json: ") + e.what());
    }
}

double evaluate_objective(const Tree& tree, const BinaryDataset& data, const ObjectiveConfig& config)
{
    const double penalty = config.lambda * tree.num_leaves();
    if (data.task() == Task::classification)
        return static_cast<double>(count_misclassified(tree, data)) / static_cast<double>(data.num_samples()) +
               penalty;
    double sse = 0.0;
    const auto& y = data.labels().values;
    for (std::size_t i = 0; i < data.num_samples(); ++i) {
        const double d = tree.predict(data, i) - y[i];
        sse += d * d;
    }
    return sse + penalty;
}

std::size_t count_misclassified(const Tree& tree, const BinaryDataset& data)
{
    std::size_t wrong = 0;
    const auto& k = data.labels().classes;
    for (std::size_t i = 0; i < data.num_samples(); ++i)
        if (tree.predict(data, i) != static_cast<double>(k[i])) ++wrong;
    return wrong;
}

} // namespace rashomon
