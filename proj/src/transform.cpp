#include "sdsplit/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace sdsplit {

int OriginMap::origin_of(int expanded_node) const {
    if (expanded_node < 0 || expanded_node >= static_cast<int>(copies.size()))
        throw std::out_of_range("node " + std::to_string(expanded_node) +
                                " is not in the origin map");
    return copies[static_cast<std::size_t>(expanded_node)].origin;
}

Expansion expand(const VrpInstance& instance, const SplitPolicy& policy) {
    instance.check();
    policy.check();

    Expansion out;
    VrpInstance& expanded = out.instance;
    expanded.name = instance.name;
    expanded.capacity = instance.capacity;
    expanded.fleet_size = instance.fleet_size;
    expanded.rounding = instance.rounding;
    expanded.has_time_windows = instance.has_time_windows;
    expanded.nodes.push_back(instance.nodes[0]);

    out.origin.copies.push_back({0, 0});
    out.origin.copies_of.resize(instance.nodes.size());

    for (std::size_t i = 1; i < instance.nodes.size(); ++i) {
        const Node& original = instance.nodes[i];
        const Partition pieces = split_demand(original.demand, instance.capacity, policy);
        for (std::int64_t piece : pieces.parts()) {
            if (piece > instance.capacity)
                throw std::logic_error("split rule produced a piece above capacity");
            Node copy = original;
            copy.id = static_cast<int>(expanded.nodes.size());
            copy.demand = piece;
            expanded.nodes.push_back(copy);
            out.origin.copies.push_back({static_cast<int>(i), piece});
            out.origin.copies_of[i].push_back(copy.id);
        }
    }
    expanded.check();
    return out;
}

Solution merge_back(const Solution& expanded_solution, const OriginMap& origin,
                    const VrpInstance& original) {
    Solution merged;
    for (const Route& route : expanded_solution.routes) {
        Route collapsed;
        std::map<int, std::size_t> seen_at;  // original customer -> index in collapsed.visits
        for (const Visit& visit : route.visits) {
            const int customer = origin.origin_of(visit.node);
            auto it = seen_at.find(customer);
            if (it == seen_at.end()) {
                seen_at[customer] = collapsed.visits.size();
                collapsed.visits.push_back({customer, visit.quantity});
            } else {
                collapsed.visits[it->second].quantity += visit.quantity;
            }
        }
        if (!collapsed.visits.empty()) merged.routes.push_back(std::move(collapsed));
    }
    merged.cost = solution_cost(original, merged);
    return merged;
}

std::int64_t count_splits(const Solution& solution) {
    std::map<int, int> routes_visiting;
    for (const Route& route : solution.routes) {
        std::map<int, bool> on_this_route;
        for (const Visit& visit : route.visits) on_this_route[visit.node] = true;
        for (const auto& [node, _] : on_this_route) ++routes_visiting[node];
    }
    std::int64_t splits = 0;
    for (const auto& [node, count] : routes_visiting)
        if (count > 1) splits += count - 1;
    return splits;
}

std::string ValidationReport::to_text() const {
    static const char* kind_names[] = {"capacity", "coverage", "fleet",
                                       "time_window", "unknown_node", "delivery"};
    std::ostringstream out;
    for (const Violation& v : violations) {
        out << kind_names[static_cast<int>(v.kind)] << " route=" << v.route << " node=" << v.node
            << " amount=" << v.amount;
        if (!v.message.empty()) out << " " << v.message;
        out << "\n";
    }
    return out.str();
}

ValidationReport validate(const VrpInstance& instance, const Solution& solution) {
    ValidationReport report;
    const int node_count = static_cast<int>(instance.nodes.size());
    std::vector<std::int64_t> delivered(instance.nodes.size(), 0);
    constexpr double kTimeTolerance = 1e-6;

    if (static_cast<int>(solution.routes.size()) > instance.fleet_size) {
        report.violations.push_back({Violation::Kind::fleet, -1, -1,
                                     static_cast<double>(solution.routes.size()),
                                     "routes exceed fleet of " +
                                         std::to_string(instance.fleet_size)});
    }

    for (std::size_t r = 0; r < solution.routes.size(); ++r) {
        const Route& route = solution.routes[r];
        std::int64_t load = 0;
        bool ids_ok = true;
        for (const Visit& visit : route.visits) {
            if (visit.node < 1 || visit.node >= node_count) {
                report.violations.push_back({Violation::Kind::unknown_node, static_cast<int>(r),
                                             visit.node, 0, "no such customer"});
                ids_ok = false;
                continue;
            }
            if (visit.quantity < 1) {
                report.violations.push_back({Violation::Kind::delivery, static_cast<int>(r),
                                             visit.node, static_cast<double>(visit.quantity),
                                             "delivery must be >= 1"});
            }
            load += visit.quantity;
            delivered[static_cast<std::size_t>(visit.node)] += visit.quantity;
        }
        if (load > instance.capacity) {
            report.violations.push_back({Violation::Kind::capacity, static_cast<int>(r), -1,
                                         static_cast<double>(load - instance.capacity),
                                         "load above capacity"});
        }

        if (instance.has_time_windows && ids_ok) {
            const Node& depot = instance.nodes[0];
            double time = depot.window ? depot.window->ready : 0;
            int prev = 0;
            for (const Visit& visit : route.visits) {
                const Node& node = instance.nodes[static_cast<std::size_t>(visit.node)];
                time += instance.travel_time(prev, visit.node);
                if (node.window) {
                    time = std::max(time, node.window->ready);
                    if (time > node.window->due + kTimeTolerance) {
                        report.violations.push_back({Violation::Kind::time_window,
                                                     static_cast<int>(r), visit.node,
                                                     time - node.window->due, "late arrival"});
                    }
                }
                time += node.service_time;
                prev = visit.node;
            }
            time += instance.travel_time(prev, 0);
            if (depot.window && time > depot.window->due + kTimeTolerance) {
                report.violations.push_back({Violation::Kind::time_window, static_cast<int>(r), 0,
                                             time - depot.window->due, "late depot return"});
            }
        }
    }

    for (int i = 1; i < node_count; ++i) {
        const std::int64_t want = instance.nodes[static_cast<std::size_t>(i)].demand;
        const std::int64_t got = delivered[static_cast<std::size_t>(i)];
        if (got != want) {
            report.violations.push_back({Violation::Kind::coverage, -1, i,
                                         static_cast<double>(got - want),
                                         "delivered " + std::to_string(got) + " of " +
                                             std::to_string(want)});
        }
    }
    return report;
}

double solution_cost(const VrpInstance& instance, const Solution& solution) {
    double total = 0;
    for (const Route& route : solution.routes) {
        if (route.visits.empty()) continue;
        int prev = 0;
        for (const Visit& visit : route.visits) {
            total += instance.edge_cost(prev, visit.node);
            prev = visit.node;
        }
        total += instance.edge_cost(prev, 0);
    }
    return total;
}

double gap_percent(double best, double bks) {
    if (bks <= 0) throw std::invalid_argument("bks must be positive");
    return 100.0 * (best - bks) / bks;
}

}  // namespace sdsplit
