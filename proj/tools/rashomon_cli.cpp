// Command-line front end: rashomon <solve|enumerate|find-multiplier|lofo|pareto|synth> [options]

#include "rashomon/analysis.hpp"
#include "rashomon/data.hpp"
#include "rashomon/enumerate.hpp"
#include "rashomon/optdp.hpp"
#include "rashomon/posteval.hpp"
#include "rashomon/tree.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

using namespace rashomon;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string data;
    std::string format = "label-first";
    std::string label_col = "label";
    std::string task = "classification";
    bool normalize = false;
    int depth = 3;
    double lambda = 0.01;
    std::optional<double> epsilon;
    std::optional<std::string> max_trees;
    bool no_trivial = false;
    std::optional<double> tolerance;
    std::string out = "-";
    std::string out_format = "jsonl";
    int sensitive_feature = -1;
    int positive_class = 1;
    std::optional<double> delta;
    std::uint64_t batch = 100000;
    std::uint64_t seed = 0;
    std::size_t samples = 200;
    std::size_t features = 10;
    double noise = 0.1;
    std::string curves;
    std::string all_points;
};

void add_data_options(CLI::App* cmd, RunConfig& c)
{
    cmd->add_option("--data", c.data, "Dataset file")->required();
    cmd->add_option("--format", c.format, "label-first | csv")->check(CLI::IsMember({"label-first", "csv"}));
    cmd->add_option("--label-col", c.label_col, "Label column name (csv)");
    cmd->add_option("--task", c.task, "classification | regression")
            ->check(CLI::IsMember({"classification", "regression"}));
    cmd->add_flag("--normalize", c.normalize, "Z-score regression labels");
    cmd->add_option("--depth", c.depth, "Depth budget")->check(CLI::NonNegativeNumber);
    cmd->add_option("--lambda", c.lambda, "Per-leaf cost")->check(CLI::NonNegativeNumber);
    cmd->add_option("--tolerance", c.tolerance, "Value equality tolerance")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-trivial-extensions", c.no_trivial, "Skip splits into two same-label leaves");
    cmd->add_option("--out", c.out, "Output path (- = stdout)");
}

void add_bound_options(CLI::App* cmd, RunConfig& c)
{
    cmd->add_option("--epsilon", c.epsilon, "Rashomon multiplier")->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-trees", c.max_trees, "Stop after this many trees");
}

BigCount parse_count(const std::string& s)
{
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError("--max-trees must be a non-negative integer");
    return BigCount(s);
}

BinaryDataset load(const RunConfig& c)
{
    LoadOptions o;
    o.format = c.format == "csv" ? FileFormat::csv : FileFormat::label_first;
    o.task = c.task == "regression" ? Task::regression : Task::classification;
    o.label_column = c.label_col;
    BinaryDataset d = load_dataset(c.data, o);
    if (c.normalize) {
        if (d.task() != Task::regression) throw UsageError("--normalize applies to regression only");
        d = d.with_normalized_labels();
    }
    return d;
}

EnumerationConfig enum_config(const RunConfig& c, const BinaryDataset& d)
{
    EnumerationConfig e;
    e.depth = c.depth;
    e.objective = ObjectiveConfig::for_task(d.task(), c.lambda);
    if (c.tolerance) e.objective.tolerance = *c.tolerance;
    e.epsilon = c.epsilon;
    e.ignore_trivial_extensions = c.no_trivial;
    return e;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }
    void flush()
    {
        os().flush();
        if (!os()) throw std::runtime_error("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string to_string(const BigCount& c) { return c.str(); }

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_solve(const RunConfig& c)
{
    const BinaryDataset d = load(c);
    ObjectiveConfig oc = ObjectiveConfig::for_task(d.task(), c.lambda);
    if (c.tolerance) oc.tolerance = *c.tolerance;
    OptimalSolver solver(d, oc);
    const OptSolution s = solver.solve_root(c.depth);
    Output out(c.out);
    out.os() << "{\"objective\":" << format_number(total_cost(s.value, oc.lambda))
             << ",\"leaves\":" << s.tree.num_leaves() << ",\"depth\":" << s.tree.depth()
             << ",\"tree\":" << serialize_tree(s.tree) << "}\n";
    out.flush();
    return 0;
}

int cmd_enumerate(const RunConfig& c)
{
    if (!c.epsilon && !c.max_trees) throw UsageError("enumerate needs --epsilon and/or --max-trees");
    const std::optional<BigCount> max_trees =
            c.max_trees ? std::optional<BigCount>(parse_count(*c.max_trees)) : std::nullopt;
    const BinaryDataset d = load(c);
    const auto t0 = std::chrono::steady_clock::now();
    RashomonEnumerator e(d, enum_config(c, d));
    Output out(c.out);
    auto& os = out.os();
    if (c.out_format == "csv") os << "rank,objective\n";

    BigCount rank = 0;
    double last = 0.0;
    while (!g_stop && (!max_trees || e.trees_emitted() < *max_trees)) {
        auto g = e.next();
        if (!g) break;
        last = g->total_cost;
        const std::string obj = format_number(g->total_cost);
        if (c.out_format == "jsonl") {
            for_each_tree(*g->group, g->count, [&](const Tree& t) {
                os << "{\"objective\":" << obj << ",\"tree\":" << serialize_tree(t) << "}\n";
                return !g_stop.load();
            });
        } else if (c.out_format == "csv") {
            for (BigCount i = 0; i < g->count && !g_stop; ++i) {
                rank += 1;
                os << rank << ',' << obj << '\n';
            }
        } else if (c.out_format == "groups") {
            os << "{\"value\":" << format_number(g->value) << ",\"objective\":" << obj
               << ",\"count\":" << to_string(g->count) << ",\"tree\":" << serialize_tree(tree_at(*g->group, 0))
               << "}\n";
        } else {
            os << "{\"objective\":" << obj << ",\"count\":" << to_string(g->count) << "}\n";
        }
        out.flush();
    }
    std::cerr << "{\"trees\":" << to_string(e.trees_emitted()) << ",\"groups\":" << e.groups_emitted()
              << ",\"last_objective\":" << format_number(last) << ",\"theta\":" << format_number(e.theta())
              << ",\"optimal\":" << format_number(e.optimal_cost())
              << ",\"complete\":" << (e.exhausted() ? "true" : "false")
              << ",\"interrupted\":" << (g_stop ? "true" : "false") << ",\"wall_seconds\":" << seconds_since(t0)
              << "}\n";
    return 0;
}

int cmd_find_multiplier(const RunConfig& c)
{
    const BinaryDataset d = load(c);
    const EnumerationConfig cfg = enum_config(c, d);
    BigCount top(1000000);
    if (c.max_trees) top = parse_count(*c.max_trees);
    Output out(c.out);
    const std::string name = std::filesystem::path(c.data).stem().string();
    out.os() << "dataset,n_trees,epsilon,achieved\n";
    for (BigCount target = 10; target <= top && !g_stop; target *= 10) {
        const MultiplierResult r = find_min_multiplier(d, cfg, target);
        out.os() << name << ',' << target << ',';
        if (!r.reached)
            out.os() << "unreachable";
        else if (r.epsilon)
            out.os() << format_number(*r.epsilon);
        else
            out.os() << "undefined";
        out.os() << ',' << r.achieved << '\n';
        out.flush();
    }
    return 0;
}

int cmd_lofo(const RunConfig& c)
{
    if (!c.max_trees) throw UsageError("lofo needs --max-trees (the Rashomon set size)");
    const BigCount n = parse_count(*c.max_trees);
    if (n < 1 || n > 100000000) throw UsageError("--max-trees for lofo must be in [1, 1e8]");
    const BinaryDataset d = load(c);
    const LofoResult r = lofo_importance(d, enum_config(c, d), static_cast<std::size_t>(n));
    Output out(c.out);
    out.os() << "feature,score,rank\n";
    for (const auto& s : r.scores) out.os() << s.feature << ',' << format_number(s.score) << ',' << s.rank << '\n';
    out.flush();
    if (!c.curves.empty()) {
        std::ofstream cv(c.curves);
        if (!cv) throw std::runtime_error("cannot open " + c.curves);
        cv << "curve,rank,cost\n";
        auto dump = [&](const std::string& name, const RashomonCurve& curve) {
            for (std::size_t i = 0; i < curve.costs.size(); ++i)
                cv << name << ',' << i + 1 << ',' << format_number(curve.costs[i]) << '\n';
        };
        dump("baseline", r.baseline);
        for (std::size_t f = 0; f < r.without.size(); ++f) dump(std::to_string(f), r.without[f]);
    }
    return 0;
}

int cmd_pareto(const RunConfig& c)
{
    if (c.sensitive_feature < 0) throw UsageError("pareto needs --sensitive-feature");
    if (!c.epsilon && !c.max_trees) throw UsageError("pareto needs --epsilon and/or --max-trees");
    const BinaryDataset d = load(c);
    if (c.sensitive_feature >= static_cast<int>(d.num_features()))
        throw UsageError("--sensitive-feature out of range");
    const EnumerationConfig cfg = enum_config(c, d);
    const SecondaryObjectiveSpec spec = eq_opportunity_spec(d, c.sensitive_feature, c.positive_class);

    RashomonEnumerator e(d, cfg);
    const auto groups = e.run(c.max_trees ? std::optional<BigCount>(parse_count(*c.max_trees)) : std::nullopt);
    const auto tuples = evaluate_secondary(d, groups, spec);

    std::unique_ptr<std::ofstream> all;
    if (!c.all_points.empty()) {
        all = std::make_unique<std::ofstream>(c.all_points);
        if (!*all) throw std::runtime_error("cannot open " + c.all_points);
        *all << "accuracy,discrimination,leaves,objective\n";
    }
    ParetoFront front;
    for (const auto& t : tuples) {
        const auto f = spec.finalize(t.stat);
        if (all)
            *all << format_number(f[0]) << ',' << format_number(f[1]) << ',' << t.witness.num_leaves() << ','
                 << format_number(t.total_cost) << '\n';
        front.add({spec.minimize(f), t.witness, t.witness.num_leaves(), t.total_cost});
    }
    Output out(c.out);
    out.os() << "accuracy,discrimination,leaves,objective,tree\n";
    auto points = front.points();
    std::sort(points.begin(), points.end(),
              [](const ParetoPoint& a, const ParetoPoint& b) { return a.coordinates < b.coordinates; });
    for (const auto& p : points) {
        const auto f = spec.finalize(tree_stat(p.witness, DataView::all(d), spec));
        std::string tree = serialize_tree(p.witness);
        std::string quoted = "\"";
        for (char ch : tree) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        quoted += '"';
        out.os() << format_number(f[0]) << ',' << format_number(f[1]) << ',' << p.tree_size << ','
                 << format_number(p.total_cost) << ',' << quoted << '\n';
    }
    out.flush();

    std::cerr << "{\"trees\":" << to_string(e.trees_emitted()) << ",\"front\":" << points.size();
    if (c.delta) {
        const double delta = *c.delta;
        const auto win = batched_constrained_search(
                d, cfg, spec, [delta](const std::vector<double>& f) { return std::fabs(f[1]) <= delta; }, c.batch);
        std::cerr << ",\"delta\":" << format_number(delta) << ",\"winner\":";
        if (win)
            std::cerr << "{\"objective\":" << format_number(win->total_cost)
                      << ",\"accuracy\":" << format_number(win->objectives[0])
                      << ",\"discrimination\":" << format_number(win->objectives[1])
                      << ",\"tree\":" << serialize_tree(win->tree) << "}";
        else
            std::cerr << "null";
    }
    std::cerr << "}\n";
    return 0;
}

int cmd_synth(const RunConfig& c)
{
    SynthOptions o;
    o.samples = c.samples;
    o.features = c.features;
    o.noise = c.noise;
    o.seed = c.seed;
    const BinaryDataset d = synthetic_dataset(o);
    Output out(c.out);
    out.os() << format_dataset(d);
    out.flush();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    CLI::App app{"Enumerate the Rashomon set of sparse decision trees in objective order"};
    app.require_subcommand(1);
    RunConfig c;

    auto* solve = app.add_subcommand("solve", "Optimal tree and its objective");
    add_data_options(solve, c);

    auto* en = app.add_subcommand("enumerate", "Stream the Rashomon set in objective order");
    add_data_options(en, c);
    add_bound_options(en, c);
    en->add_option("--out-format", c.out_format, "jsonl | groups | count | csv")
            ->check(CLI::IsMember({"jsonl", "groups", "count", "csv"}));

    auto* fm = app.add_subcommand("find-multiplier", "Smallest multiplier per target set size 10^1..10^6");
    add_data_options(fm, c);
    fm->add_option("--max-trees", c.max_trees, "Largest target (default 1000000)");

    auto* lofo = app.add_subcommand("lofo", "Leave-one-feature-out importance");
    add_data_options(lofo, c);
    lofo->add_option("--max-trees", c.max_trees, "Rashomon set size")->required();
    lofo->add_option("--curves", c.curves, "Also write sorted-cost curves (CSV)");

    auto* pareto = app.add_subcommand("pareto", "Accuracy / equality-of-opportunity Pareto front");
    add_data_options(pareto, c);
    add_bound_options(pareto, c);
    pareto->add_option("--sensitive-feature", c.sensitive_feature, "Feature defining group 1")->required();
    pareto->add_option("--positive-class", c.positive_class, "Positive class id");
    pareto->add_option("--delta", c.delta, "Discrimination limit for the constrained search")
            ->check(CLI::NonNegativeNumber);
    pareto->add_option("--batch", c.batch, "Trees per batch in the constrained search")->check(CLI::PositiveNumber);
    pareto->add_option("--all-points", c.all_points, "Also write every evaluated point (CSV)");

    auto* synth = app.add_subcommand("synth", "Write a seeded random binary dataset");
    synth->add_option("--seed", c.seed, "Random seed");
    synth->add_option("--samples", c.samples, "Number of samples")->check(CLI::PositiveNumber);
    synth->add_option("--features", c.features, "Number of features")->check(CLI::PositiveNumber);
    synth->add_option("--noise", c.noise, "Label flip probability")->check(CLI::Range(0.0, 1.0));
    synth->add_option("--out", c.out, "Output path (- = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*solve) return cmd_solve(c);
        if (*en) return cmd_enumerate(c);
        if (*fm) return cmd_find_multiplier(c);
        if (*lofo) return cmd_lofo(c);
        if (*pareto) return cmd_pareto(c);
        if (*synth) return cmd_synth(c);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const UndefinedStatistic& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
