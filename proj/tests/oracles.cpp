#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "sdsplit/transform.hpp"

namespace oracles {

using sdsplit::Route;
using sdsplit::Solution;
using sdsplit::Visit;
using sdsplit::VrpInstance;

std::int64_t count_partitions(std::int64_t n, int max_parts) {
    if (n == 0) return 1;
    if (n < 0 || max_parts == 0) return 0;
    // parts bounded by n itself; count partitions with largest part = p
    std::function<std::int64_t(std::int64_t, std::int64_t, int)> rec =
        [&](std::int64_t rem, std::int64_t max_part, int left) -> std::int64_t {
        if (rem == 0) return 1;
        if (left == 0) return 0;
        std::int64_t total = 0;
        for (std::int64_t p = std::min(rem, max_part); p >= 1; --p)
            total += rec(rem - p, p, left - 1);
        return total;
    };
    return rec(n, n, max_parts);
}

std::vector<std::vector<std::int64_t>> all_partitions(std::int64_t n, int max_parts) {
    // Ascending compositions a1 <= a2 <= ...; sorted descending afterwards.
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> current;
    std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t rem,
                                                              std::int64_t min_part) {
        if (rem == 0) {
            auto sorted = current;
            std::sort(sorted.begin(), sorted.end(), std::greater<>());
            out.push_back(std::move(sorted));
            return;
        }
        if (static_cast<int>(current.size()) == max_parts) return;
        for (std::int64_t p = min_part; p <= rem; ++p) {
            current.push_back(p);
            rec(rem - p, p);
            current.pop_back();
        }
    };
    rec(n, 1);
    return out;
}

std::vector<std::int64_t> ceiling_partition(std::int64_t n, std::int64_t k) {
    std::vector<std::int64_t> parts;
    while (n > 0) {
        const std::int64_t piece = (n + k - 1) / k;
        parts.push_back(piece);
        n -= piece;
    }
    return parts;
}

namespace {

bool tour_time_feasible(const VrpInstance& inst, const std::vector<int>& order) {
    if (!inst.has_time_windows) return true;
    const sdsplit::Node& depot = inst.nodes[0];
    double time = depot.window ? depot.window->ready : 0;
    int prev = 0;
    for (int id : order) {
        const sdsplit::Node& node = inst.nodes[static_cast<std::size_t>(id)];
        time += inst.travel_time(prev, id);
        if (node.window) {
            time = std::max(time, node.window->ready);
            if (time > node.window->due + 1e-7) return false;
        }
        time += node.service_time;
        prev = id;
    }
    time += inst.travel_time(prev, 0);
    return !depot.window || time <= depot.window->due + 1e-7;
}

double tour_cost(const VrpInstance& inst, const std::vector<int>& order) {
    if (order.empty()) return 0;
    double total = inst.edge_cost(0, order.front());
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        total += inst.edge_cost(order[i], order[i + 1]);
    total += inst.edge_cost(order.back(), 0);
    return total;
}

std::optional<std::pair<double, std::vector<int>>> best_tour(const VrpInstance& inst,
                                                             std::vector<int> customers) {
    std::sort(customers.begin(), customers.end());
    std::optional<std::pair<double, std::vector<int>>> best;
    do {
        if (!tour_time_feasible(inst, customers)) continue;
        const double cost = tour_cost(inst, customers);
        if (!best || cost < best->first) best = {cost, customers};
    } while (std::next_permutation(customers.begin(), customers.end()));
    return best;
}

// Tiny Ford-Fulkerson on an adjacency matrix; capacities are
// counts of units, so integral flows come out naturally.
class MaxFlow {
public:
    explicit MaxFlow(int nodes) : n_(nodes), cap_(static_cast<std::size_t>(nodes) * nodes, 0) {}

    void add(int from, int to, std::int64_t capacity) {
        cap_[static_cast<std::size_t>(from) * n_ + to] += capacity;
    }

    std::int64_t run(int source, int sink) {
        std::int64_t total = 0;
        for (;;) {
            std::vector<int> parent(static_cast<std::size_t>(n_), -1);
            parent[static_cast<std::size_t>(source)] = source;
            std::vector<int> queue{source};
            for (std::size_t head = 0; head < queue.size() && parent[static_cast<std::size_t>(
                                                                  sink)] < 0;
                 ++head) {
                const int u = queue[head];
                for (int v = 0; v < n_; ++v) {
                    if (parent[static_cast<std::size_t>(v)] < 0 &&
                        cap_[static_cast<std::size_t>(u) * n_ + v] > 0) {
                        parent[static_cast<std::size_t>(v)] = u;
                        queue.push_back(v);
                    }
                }
            }
            if (parent[static_cast<std::size_t>(sink)] < 0) return total;
            std::int64_t bottleneck = std::numeric_limits<std::int64_t>::max();
            for (int v = sink; v != source; v = parent[static_cast<std::size_t>(v)])
                bottleneck = std::min(
                    bottleneck,
                    cap_[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)]) * n_ + v]);
            for (int v = sink; v != source; v = parent[static_cast<std::size_t>(v)]) {
                const int u = parent[static_cast<std::size_t>(v)];
                cap_[static_cast<std::size_t>(u) * n_ + v] -= bottleneck;
                cap_[static_cast<std::size_t>(v) * n_ + u] += bottleneck;
            }
            total += bottleneck;
        }
    }

    std::int64_t flow_on(int from, int to) const {
        // residual gained on the reverse arc equals the flow pushed
        return cap_[static_cast<std::size_t>(to) * n_ + from];
    }

private:
    int n_;
    std::vector<std::int64_t> cap_;
};

}  // namespace

std::optional<double> best_tour_cost(const VrpInstance& instance,
                                     const std::vector<int>& customers) {
    auto best = best_tour(instance, customers);
    if (!best) return std::nullopt;
    return best->first;
}

std::optional<Solution> cvrp_optimum(const VrpInstance& instance) {
    const int n = instance.customer_count();
    const int fleet = instance.fleet_size;
    std::vector<std::vector<int>> groups;
    std::optional<Solution> best;
    double best_cost = std::numeric_limits<double>::infinity();

    // tours per customer subset, keyed by bitmask
    std::vector<std::optional<std::pair<double, std::vector<int>>>> tour_memo(
        static_cast<std::size_t>(1) << n);
    std::vector<bool> tour_known(static_cast<std::size_t>(1) << n, false);
    auto tour_of = [&](const std::vector<int>& group) {
        std::size_t mask = 0;
        for (int id : group) mask |= static_cast<std::size_t>(1) << (id - 1);
        if (!tour_known[mask]) {
            tour_known[mask] = true;
            tour_memo[mask] = best_tour(instance, group);
        }
        return tour_memo[mask];
    };

    std::function<void(int)> assign = [&](int customer) {
        if (customer > n) {
            Solution candidate;
            double total = 0;
            for (const auto& group : groups) {
                auto tour = tour_of(group);
                if (!tour) return;
                total += tour->first;
                if (total >= best_cost) return;
                Route route;
                for (int id : tour->second)
                    route.visits.push_back(
                        {id, instance.nodes[static_cast<std::size_t>(id)].demand});
                candidate.routes.push_back(std::move(route));
            }
            candidate.cost = total;
            best = std::move(candidate);
            best_cost = total;
            return;
        }
        const std::int64_t demand = instance.nodes[static_cast<std::size_t>(customer)].demand;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            std::int64_t load = 0;
            for (int id : groups[g]) load += instance.nodes[static_cast<std::size_t>(id)].demand;
            if (load + demand > instance.capacity) continue;
            groups[g].push_back(customer);
            assign(customer + 1);
            groups[g].pop_back();
        }
        if (static_cast<int>(groups.size()) < fleet) {
            groups.push_back({customer});
            assign(customer + 1);
            groups.pop_back();
        }
    };
    assign(1);
    return best;
}

std::optional<Solution> sdvrp_optimum(const VrpInstance& instance) {
    const int n = instance.customer_count();
    const int fleet = instance.fleet_size;
    const int subsets = (1 << n) - 1;

    // Optimal tour cost and order per customer subset.
    std::vector<double> subset_cost(static_cast<std::size_t>(subsets) + 1, 0);
    std::vector<std::vector<int>> subset_order(static_cast<std::size_t>(subsets) + 1);
    std::vector<bool> subset_ok(static_cast<std::size_t>(subsets) + 1, false);
    for (int mask = 1; mask <= subsets; ++mask) {
        std::vector<int> customers;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) customers.push_back(i + 1);
        if (static_cast<std::int64_t>(customers.size()) > instance.capacity)
            continue;  // each visit needs at least one unit
        auto tour = best_tour(instance, customers);
        if (!tour) continue;
        subset_ok[static_cast<std::size_t>(mask)] = true;
        subset_cost[static_cast<std::size_t>(mask)] = tour->first;
        subset_order[static_cast<std::size_t>(mask)] = tour->second;
    }

    std::vector<std::int64_t> demand(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) demand[static_cast<std::size_t>(i)] =
        instance.nodes[static_cast<std::size_t>(i)].demand;

    // Does an integral assignment exist for this multiset of routes, with
    // every visit delivering at least one unit? If so, fill quantities.
    auto assign_quantities = [&](const std::vector<int>& masks,
                                 std::vector<std::vector<std::int64_t>>& quantities) -> bool {
        std::vector<int> visits_of(static_cast<std::size_t>(n) + 1, 0);
        for (int mask : masks)
            for (int i = 0; i < n; ++i)
                if (mask & (1 << i)) ++visits_of[static_cast<std::size_t>(i + 1)];
        std::int64_t surplus_total = 0;
        for (int i = 1; i <= n; ++i) {
            if (visits_of[static_cast<std::size_t>(i)] == 0) return false;
            if (visits_of[static_cast<std::size_t>(i)] > demand[static_cast<std::size_t>(i)])
                return false;
            surplus_total += demand[static_cast<std::size_t>(i)] -
                             visits_of[static_cast<std::size_t>(i)];
        }
        // flow network: 0 = source, 1..n = customers, n+1..n+m = routes, last = sink
        const int m = static_cast<int>(masks.size());
        MaxFlow flow(n + m + 2);
        const int sink = n + m + 1;
        for (int i = 1; i <= n; ++i)
            flow.add(0, i, demand[static_cast<std::size_t>(i)] -
                               visits_of[static_cast<std::size_t>(i)]);
        for (int j = 0; j < m; ++j) {
            std::int64_t members = 0;
            for (int i = 0; i < n; ++i)
                if (masks[static_cast<std::size_t>(j)] & (1 << i)) {
                    flow.add(i + 1, n + 1 + j, demand[static_cast<std::size_t>(i + 1)]);
                    ++members;
                }
            flow.add(n + 1 + j, sink, instance.capacity - members);
        }
        if (flow.run(0, sink) != surplus_total) return false;
        quantities.assign(masks.size(), {});
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < n; ++i) {
                if (masks[static_cast<std::size_t>(j)] & (1 << i))
                    quantities[static_cast<std::size_t>(j)].push_back(
                        1 + flow.flow_on(i + 1, n + 1 + j));
            }
        }
        return true;
    };

    std::optional<Solution> best;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<int> chosen;

    std::function<void(int, double)> enumerate = [&](int min_mask, double cost_so_far) {
        if (cost_so_far >= best_cost) return;
        std::vector<std::vector<std::int64_t>> quantities;
        if (!chosen.empty() && assign_quantities(chosen, quantities)) {
            Solution candidate;
            for (std::size_t j = 0; j < chosen.size(); ++j) {
                Route route;
                std::size_t qi = 0;
                // quantities are listed in ascending customer order
                std::vector<std::pair<int, std::int64_t>> pairs;
                for (int i = 0; i < n; ++i)
                    if (chosen[j] & (1 << i)) pairs.push_back({i + 1, quantities[j][qi++]});
                for (int id : subset_order[static_cast<std::size_t>(chosen[j])]) {
                    for (auto& [customer, qty] : pairs)
                        if (customer == id) route.visits.push_back({id, qty});
                }
                candidate.routes.push_back(std::move(route));
            }
            candidate.cost = cost_so_far;
            best = std::move(candidate);
            best_cost = cost_so_far;
        }
        if (static_cast<int>(chosen.size()) == fleet) return;
        for (int mask = min_mask; mask <= subsets; ++mask) {
            if (!subset_ok[static_cast<std::size_t>(mask)]) continue;
            chosen.push_back(mask);
            enumerate(mask, cost_so_far + subset_cost[static_cast<std::size_t>(mask)]);
            chosen.pop_back();
        }
    };
    enumerate(1, 0);
    return best;
}

}  // namespace oracles
