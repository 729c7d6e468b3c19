#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "sdsplit/partition.hpp"
#include "sdsplit/solver.hpp"
#include "sdsplit/sweep.hpp"
#include "sdsplit/transform.hpp"

namespace py = pybind11;
using namespace sdsplit;

namespace {

// Python-facing q values arrive as decimal strings or floats; strings keep
// the comparison exact, floats are snapped to 1e-6 resolution.
Rational q_from_object(const py::object& q) {
    if (py::isinstance<py::str>(q)) return Rational::from_decimal(q.cast<std::string>());
    const double value = q.cast<double>();
    return Rational(static_cast<std::int64_t>(std::llround(value * 1'000'000)), 1'000'000);
}

std::vector<std::int64_t> parts_of(const Partition& p) { return p.parts(); }

SplitPolicy policy_from(const std::string& rule, int k_bar, const py::object& q) {
    const Rational q_value = q_from_object(q);
    if (rule == "denom20") return SplitPolicy::denomination_20(q_value);
    if (rule == "denom25") return SplitPolicy::denomination_25(q_value);
    if (rule == "lossless") return SplitPolicy::lossless(k_bar, q_value);
    throw std::invalid_argument("unknown rule " + rule);
}

SolverParams params_from(std::uint64_t seed, int runs, std::int64_t max_trials,
                         double time_limit, const std::string& backend,
                         const std::string& solver_path) {
    SolverParams p;
    p.seed = seed;
    p.runs = runs;
    p.max_trials = max_trials;
    p.time_limit = std::chrono::duration<double>(time_limit);
    p.backend = backend == "external" ? SolverBackend::external : SolverBackend::internal;
    p.external_path = solver_path;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "lossless a priori demand splitting for split-delivery routing";

    py::register_exception<InfeasibleError>(m, "InfeasibleError");
    py::register_exception<ExternalSolverError>(m, "ExternalSolverError");
    py::register_exception<ParseError>(m, "InstanceParseError");

    // partition arithmetic
    m.def(
        "mscp",
        [](std::int64_t n, int k) { return parts_of(mscp(n, k)); },
        py::arg("n"), py::arg("k"),
        "Minimum-size partition of n that coalesces to all k-partitions.");
    m.def("mscp_size", &mscp_size, py::arg("n"), py::arg("k"));
    m.def("size_bound", &size_bound, py::arg("n"), py::arg("k"));
    m.def("mscp_table", &mscp_table, py::arg("n_max") = 20, py::arg("k_max") = 10);
    m.def(
        "enumerate_partitions",
        [](std::int64_t n, int max_parts) {
            std::vector<std::vector<std::int64_t>> out;
            for (const Partition& p : enumerate_partitions(n, max_parts)) out.push_back(p.parts());
            return out;
        },
        py::arg("n"), py::arg("max_parts"));
    m.def(
        "coalesces_to",
        [](std::vector<std::int64_t> mu, std::vector<std::int64_t> lambda)
            -> std::optional<std::vector<std::vector<std::size_t>>> {
            auto found = coalesces_to(Partition(std::move(mu)), Partition(std::move(lambda)));
            if (!found) return std::nullopt;
            return found->groups;
        },
        py::arg("mu"), py::arg("lam"),
        "Groups of mu-part indices forming lam, or None.");
    m.def(
        "coalesces_to_all",
        [](std::vector<std::int64_t> mu, int k) {
            return coalesces_to_all(Partition(std::move(mu)), k);
        },
        py::arg("mu"), py::arg("k"));
    m.def(
        "greedy_coalesce",
        [](std::vector<std::int64_t> mu, std::vector<std::int64_t> gamma) {
            return greedy_coalesce(Partition(std::move(mu)), Partition(std::move(gamma))).groups;
        },
        py::arg("mu"), py::arg("gamma"));
    m.def("verify_minimality", &verify_minimality, py::arg("n"), py::arg("k"),
          py::arg("max_nodes") = 50'000'000);

    // split rules
    m.def(
        "lossless_split",
        [](std::int64_t d, std::int64_t capacity, int k_bar, const py::object& q) {
            return parts_of(lossless_split(d, capacity, k_bar, q_from_object(q)));
        },
        py::arg("demand"), py::arg("capacity"), py::arg("k_bar"), py::arg("q") = 0.0);
    m.def(
        "denomination_split",
        [](std::int64_t d, std::int64_t capacity, const std::string& rule) {
            const SplitPolicy policy = rule == "denom25" ? SplitPolicy::denomination_25()
                                                         : SplitPolicy::denomination_20();
            return parts_of(denomination_split(d, capacity, policy.denominations));
        },
        py::arg("demand"), py::arg("capacity"), py::arg("rule") = "denom20");

    // instance model
    py::class_<TimeWindow>(m, "TimeWindow")
        .def_readonly("ready", &TimeWindow::ready)
        .def_readonly("due", &TimeWindow::due);
    py::class_<Node>(m, "Node")
        .def_readonly("id", &Node::id)
        .def_readonly("x", &Node::x)
        .def_readonly("y", &Node::y)
        .def_readonly("demand", &Node::demand)
        .def_readonly("window", &Node::window)
        .def_readonly("service_time", &Node::service_time);
    py::class_<VrpInstance>(m, "VrpInstance")
        .def_readonly("name", &VrpInstance::name)
        .def_readonly("nodes", &VrpInstance::nodes)
        .def_readonly("capacity", &VrpInstance::capacity)
        .def_readonly("fleet_size", &VrpInstance::fleet_size)
        .def_readonly("has_time_windows", &VrpInstance::has_time_windows)
        .def_property_readonly("customer_count", &VrpInstance::customer_count)
        .def("edge_cost", &VrpInstance::edge_cost)
        .def("travel_time", &VrpInstance::travel_time)
        .def("__repr__", [](const VrpInstance& inst) {
            return "<VrpInstance " + inst.name + ", " + std::to_string(inst.customer_count()) +
                   " customers, Q=" + std::to_string(inst.capacity) + ">";
        });
    py::class_<Visit>(m, "Visit")
        .def_readonly("node", &Visit::node)
        .def_readonly("quantity", &Visit::quantity);
    py::class_<Route>(m, "Route")
        .def_readonly("visits", &Route::visits)
        .def_property_readonly("load", &Route::load);
    py::class_<Solution>(m, "Solution")
        .def_readonly("routes", &Solution::routes)
        .def_readonly("cost", &Solution::cost);

    m.def("parse_tsplib", &parse_tsplib, py::arg("text"));
    m.def("parse_solomon", &parse_solomon, py::arg("text"), py::arg("max_customers") = 0,
          py::arg("capacity_override") = 0);
    m.def("write_tsplib", &write_tsplib, py::arg("instance"));
    m.def("k_min", &k_min, py::arg("instance"));
    m.def(
        "generate_random",
        [](const VrpInstance& base, const std::string& range, std::uint64_t seed,
           std::int64_t capacity) {
            return generate_random(base, demand_range_from_string(range), seed, capacity);
        },
        py::arg("base"), py::arg("demand_range"), py::arg("seed"), py::arg("capacity") = 160);

    // the reduction
    py::class_<OriginMap>(m, "OriginMap")
        .def("origin_of", &OriginMap::origin_of)
        .def_property_readonly("pieces", [](const OriginMap& origin) {
            std::vector<std::pair<int, std::int64_t>> out;
            for (const auto& copy : origin.copies) out.push_back({copy.origin, copy.piece});
            return out;
        });
    py::class_<Expansion>(m, "Expansion")
        .def_readonly("instance", &Expansion::instance)
        .def_readonly("origin", &Expansion::origin);

    m.def(
        "expand",
        [](const VrpInstance& inst, const std::string& rule, int k_bar, const py::object& q) {
            return expand(inst, policy_from(rule, k_bar, q));
        },
        py::arg("instance"), py::arg("rule") = "lossless", py::arg("k_bar") = 2,
        py::arg("q") = 0.0);
    m.def(
        "expanded_size",
        [](const VrpInstance& inst, const std::string& rule, int k_bar, const py::object& q) {
            return expanded_size(inst, policy_from(rule, k_bar, q));
        },
        py::arg("instance"), py::arg("rule") = "lossless", py::arg("k_bar") = 2,
        py::arg("q") = 0.0);
    m.def("merge_back", &merge_back, py::arg("expanded_solution"), py::arg("origin"),
          py::arg("original"));
    m.def("count_splits", &count_splits, py::arg("solution"));
    m.def(
        "validate",
        [](const VrpInstance& inst, const Solution& solution) {
            const ValidationReport report = validate(inst, solution);
            return py::make_tuple(report.ok(), report.to_text());
        },
        py::arg("instance"), py::arg("solution"), "Returns (ok, report_text).");
    m.def("solution_cost", &solution_cost, py::arg("instance"), py::arg("solution"));
    m.def("gap_percent", &gap_percent, py::arg("best"), py::arg("bks"));

    // solving
    m.def(
        "solve",
        [](const VrpInstance& inst, std::uint64_t seed, int runs, std::int64_t max_trials,
           double time_limit, const std::string& backend, const std::string& solver_path) {
            return solve(inst, params_from(seed, runs, max_trials, time_limit, backend,
                                           solver_path));
        },
        py::arg("instance"), py::arg("seed") = 1, py::arg("runs") = 10,
        py::arg("max_trials") = 100000, py::arg("time_limit") = 60.0,
        py::arg("backend") = "internal", py::arg("solver_path") = "");
    m.def(
        "write_solver_files",
        [](const VrpInstance& inst, const std::string& problem_path,
           const std::string& tour_path, std::uint64_t seed, int runs, std::int64_t max_trials,
           double time_limit) {
            const SolverFiles files = write_solver_files(
                inst, params_from(seed, runs, max_trials, time_limit, "external", ""),
                problem_path, tour_path);
            return py::make_tuple(files.problem_text, files.parameter_text);
        },
        py::arg("instance"), py::arg("problem_path"), py::arg("tour_path"), py::arg("seed") = 1,
        py::arg("runs") = 10, py::arg("max_trials") = 100000, py::arg("time_limit") = 60.0);
    m.def("parse_solver_tour", &parse_solver_tour, py::arg("text"), py::arg("instance"));
}
