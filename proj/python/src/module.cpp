#include "rashomon/analysis.hpp"
#include "rashomon/data.hpp"
#include "rashomon/enumerate.hpp"
#include "rashomon/tree.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rashomon;

namespace {

py::int_ to_py(const BigCount& n)
{
    return py::int_(py::module_::import("builtins").attr("int")(n.str()));
}

BigCount from_py(const py::int_& n) { return BigCount(py::str(py::handle(n)).cast<std::string>()); }

Task parse_task(const std::string& s)
{
    if (s == "classification") return Task::classification;
    if (s == "regression") return Task::regression;
    throw py::value_error("task must be 'classification' or 'regression'");
}

EnumerationConfig make_config(const BinaryDataset& d, int depth, double lam, std::optional<double> epsilon,
                              std::optional<double> theta, bool ignore_trivial)
{
    EnumerationConfig c;
    c.depth = depth;
    c.objective = ObjectiveConfig::for_task(d.task(), lam);
    c.epsilon = epsilon;
    c.theta = theta;
    c.ignore_trivial_extensions = ignore_trivial;
    return c;
}

/// Emitted group with its trees reachable from Python.
struct PyGroup {
    EmittedGroup g;

    std::vector<std::string> trees(std::size_t limit) const
    {
        std::vector<std::string> out;
        for (const auto& t : materialize(*g.group, limit)) out.push_back(serialize_tree(t));
        return out;
    }
};

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Sorted enumeration of near-optimal sparse decision trees";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    py::class_<BinaryDataset>(m, "Dataset")
        .def_static(
            "load",
            [](const std::string& path, const std::string& task, bool csv, const std::string& label_column) {
                LoadOptions o;
                o.task = parse_task(task);
                o.format = csv ? FileFormat::csv : FileFormat::label_first;
                o.label_column = label_column;
                return load_dataset(path, o);
            },
            py::arg("path"), py::arg("task") = "classification", py::arg("csv") = false,
            py::arg("label_column") = "label")
        .def_static(
            "parse",
            [](const std::string& text, const std::string& task, bool remove_redundant) {
                LoadOptions o;
                o.task = parse_task(task);
                o.remove_redundant_features = remove_redundant;
                return parse_dataset(text, o);
            },
            py::arg("text"), py::arg("task") = "classification", py::arg("remove_redundant") = true)
        .def_static(
            "synthetic",
            [](std::size_t samples, std::size_t features, double noise, std::uint64_t seed) {
                return synthetic_dataset({samples, features, noise, seed});
            },
            py::arg("samples") = 100, py::arg("features") = 8, py::arg("noise") = 0.1, py::arg("seed") = 0)
        .def_property_readonly("num_samples", &BinaryDataset::num_samples)
        .def_property_readonly("num_features", &BinaryDataset::num_features)
        .def_property_readonly("feature_names", &BinaryDataset::feature_names)
        .def("__str__", &format_dataset);

    py::class_<PyGroup>(m, "Group")
        .def_property_readonly("value", [](const PyGroup& p) { return p.g.value; })
        .def_property_readonly("total_cost", [](const PyGroup& p) { return p.g.total_cost; })
        .def_property_readonly("count", [](const PyGroup& p) { return to_py(p.g.count); })
        .def("trees", &PyGroup::trees, py::arg("limit") = 1000,
             "Serialized trees of the group in rank order, at most `limit`.");

    py::class_<RashomonEnumerator>(m, "Enumerator")
        .def(py::init([](const BinaryDataset& d, int depth, double lam, std::optional<double> epsilon,
                         std::optional<double> theta, bool ignore_trivial) {
                 return std::make_unique<RashomonEnumerator>(
                     d, make_config(d, depth, lam, epsilon, theta, ignore_trivial));
             }),
             py::arg("dataset"), py::arg("depth") = 3, py::arg("lam") = 0.01, py::arg("epsilon") = py::none(),
             py::arg("theta") = py::none(), py::arg("ignore_trivial_extensions") = false, py::keep_alive<1, 2>())
        .def("__iter__", [](py::object self) { return self; })
        .def("__next__",
             [](RashomonEnumerator& e) {
                 auto g = e.next();
                 if (!g) throw py::stop_iteration();
                 return PyGroup{*g};
             },
             py::keep_alive<0, 1>())
        .def_property_readonly("optimal_cost", &RashomonEnumerator::optimal_cost)
        .def_property_readonly("optimal_tree",
                               [](const RashomonEnumerator& e) { return serialize_tree(e.optimal_tree()); })
        .def_property_readonly("theta", &RashomonEnumerator::theta)
        .def_property_readonly("exhausted", &RashomonEnumerator::exhausted)
        .def_property_readonly("trees_emitted", [](const RashomonEnumerator& e) { return to_py(e.trees_emitted()); });

    m.def(
        "evaluate",
        [](const std::string& tree, const BinaryDataset& d, double lam) {
            return evaluate_objective(parse_tree(tree), d, ObjectiveConfig::for_task(d.task(), lam));
        },
        py::arg("tree"), py::arg("dataset"), py::arg("lam"), "Objective of a serialized tree on a dataset.");

    m.def(
        "find_min_multiplier",
        [](const BinaryDataset& d, const py::int_& target, int depth, double lam) {
            const auto r = find_min_multiplier(d, make_config(d, depth, lam, {}, {}, false), from_py(target));
            py::dict out;
            out["epsilon"] = r.epsilon ? py::object(py::float_(*r.epsilon)) : py::object(py::none());
            out["achieved"] = to_py(r.achieved);
            out["reached"] = r.reached;
            out["optimal_cost"] = r.optimal_cost;
            return out;
        },
        py::arg("dataset"), py::arg("target"), py::arg("depth") = 3, py::arg("lam") = 0.01);

    m.def(
        "lofo",
        [](const BinaryDataset& d, std::size_t set_size, int depth, double lam) {
            const auto r = lofo_importance(d, make_config(d, depth, lam, {}, {}, false), set_size);
            std::vector<std::tuple<int, double, int>> out;
            for (const auto& s : r.scores) out.emplace_back(s.feature, s.score, s.rank);
            return out;
        },
        py::arg("dataset"), py::arg("set_size"), py::arg("depth") = 3, py::arg("lam") = 0.01,
        "(feature, score, rank) per feature; rank 1 is most important.");
}
