#include "sdsplit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace sdsplit {

namespace {

constexpr double kEps = 1e-9;

// Portable bounded uniform draw, same scheme as the instance generator.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % n);
}

struct RoutePlan {
    std::vector<int> nodes;  // customer ids, depot implicit
    std::int64_t load = 0;
};

class InternalSolver {
public:
    InternalSolver(const VrpInstance& instance, const SolverParams& params)
        : inst_(instance), params_(params), rng_(params.seed) {
        const std::size_t n = inst_.nodes.size();
        if (n <= kMatrixLimit) {
            matrix_.resize(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    matrix_[i * n + j] = inst_.travel_time(static_cast<int>(i), static_cast<int>(j));
        }
        deadline_ = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        params_.time_limit);
    }

    Solution run() {
        check_basic_feasibility();
        std::vector<RoutePlan> best = construct();
        local_search(best);
        double best_cost = total_cost(best);

        for (int run = 1; run < params_.runs && !out_of_time(); ++run) {
            std::vector<RoutePlan> candidate = best;
            perturb(candidate);
            local_search(candidate);
            const double cost = total_cost(candidate);
            if (cost < best_cost - kEps) {
                best = std::move(candidate);
                best_cost = cost;
            }
        }
        return to_solution(best, best_cost);
    }

private:
    static constexpr std::size_t kMatrixLimit = 3000;

    double tt(int i, int j) const {
        if (!matrix_.empty())
            return matrix_[static_cast<std::size_t>(i) * inst_.nodes.size() +
                           static_cast<std::size_t>(j)];
        return inst_.travel_time(i, j);
    }

    double cost(int i, int j) const {
        const double d = tt(i, j);
        return inst_.rounding == CostRounding::nearest_int ? std::floor(d + 0.5) : d;
    }

    bool out_of_time() const { return std::chrono::steady_clock::now() >= deadline_; }

    void check_basic_feasibility() const {
        if (k_min(inst_) > inst_.fleet_size)
            throw InfeasibleError("fleet of " + std::to_string(inst_.fleet_size) +
                                  " vehicles cannot carry the total demand (needs " +
                                  std::to_string(k_min(inst_)) + ")");
        for (std::size_t i = 1; i < inst_.nodes.size(); ++i) {
            if (inst_.nodes[i].demand > inst_.capacity)
                throw InfeasibleError("customer " + std::to_string(i) +
                                      " has demand above vehicle capacity; split it first");
        }
    }

    double route_cost(const std::vector<int>& nodes) const {
        if (nodes.empty()) return 0;
        double total = cost(0, nodes.front());
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) total += cost(nodes[i], nodes[i + 1]);
        total += cost(nodes.back(), 0);
        return total;
    }

    double total_cost(const std::vector<RoutePlan>& routes) const {
        double total = 0;
        for (const RoutePlan& r : routes) total += route_cost(r.nodes);
        return total;
    }

    bool time_feasible(const std::vector<int>& nodes) const {
        if (!inst_.has_time_windows) return true;
        const Node& depot = inst_.nodes[0];
        double time = depot.window ? depot.window->ready : 0;
        int prev = 0;
        for (int id : nodes) {
            const Node& node = inst_.nodes[static_cast<std::size_t>(id)];
            time += tt(prev, id);
            if (node.window) {
                time = std::max(time, node.window->ready);
                if (time > node.window->due + 1e-7) return false;
            }
            time += node.service_time;
            prev = id;
        }
        time += tt(prev, 0);
        return !depot.window || time <= depot.window->due + 1e-7;
    }

    bool feasible(const RoutePlan& route) const {
        return route.load <= inst_.capacity && time_feasible(route.nodes);
    }

    // Clarke-Wright parallel savings with feasibility checks on every merge.
    std::vector<RoutePlan> construct() {
        const int n = inst_.customer_count();
        std::vector<RoutePlan> routes;
        routes.reserve(static_cast<std::size_t>(n));
        std::vector<int> route_of(static_cast<std::size_t>(n) + 1, -1);
        for (int i = 1; i <= n; ++i) {
            RoutePlan r;
            r.nodes = {i};
            r.load = inst_.nodes[static_cast<std::size_t>(i)].demand;
            if (!time_feasible(r.nodes))
                throw InfeasibleError("customer " + std::to_string(i) +
                                      " cannot be served within its time window");
            route_of[static_cast<std::size_t>(i)] = i - 1;
            routes.push_back(std::move(r));
        }

        struct Saving {
            int i, j;
            double value;
        };
        std::vector<Saving> savings;
        savings.reserve(static_cast<std::size_t>(n) * (n - 1));
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                if (i != j) savings.push_back({i, j, cost(i, 0) + cost(0, j) - cost(i, j)});
        std::stable_sort(savings.begin(), savings.end(), [](const Saving& a, const Saving& b) {
            if (a.value != b.value) return a.value > b.value;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });

        for (const Saving& s : savings) {
            if (s.value <= kEps) break;
            const int ra = route_of[static_cast<std::size_t>(s.i)];
            const int rb = route_of[static_cast<std::size_t>(s.j)];
            if (ra == rb || ra < 0 || rb < 0) continue;
            RoutePlan& a = routes[static_cast<std::size_t>(ra)];
            RoutePlan& b = routes[static_cast<std::size_t>(rb)];
            if (a.nodes.empty() || b.nodes.empty()) continue;
            if (a.nodes.back() != s.i || b.nodes.front() != s.j) continue;
            if (a.load + b.load > inst_.capacity) continue;
            std::vector<int> joined = a.nodes;
            joined.insert(joined.end(), b.nodes.begin(), b.nodes.end());
            if (!time_feasible(joined)) continue;
            a.nodes = std::move(joined);
            a.load += b.load;
            for (int id : b.nodes) route_of[static_cast<std::size_t>(id)] = ra;
            b.nodes.clear();
            b.load = 0;
        }

        routes.erase(std::remove_if(routes.begin(), routes.end(),
                                    [](const RoutePlan& r) { return r.nodes.empty(); }),
                     routes.end());
        if (static_cast<int>(routes.size()) > inst_.fleet_size) reduce_fleet(routes);
        return routes;
    }

    // Brings the route count down to the fleet size: relocation first, then
    // (without time windows) a bounded exact repack of the demands.
    void reduce_fleet(std::vector<RoutePlan>& routes) {
        while (static_cast<int>(routes.size()) > inst_.fleet_size) {
            std::size_t smallest = 0;
            for (std::size_t r = 1; r < routes.size(); ++r)
                if (routes[r].nodes.size() < routes[smallest].nodes.size()) smallest = r;

            RoutePlan victim = routes[smallest];
            routes.erase(routes.begin() + static_cast<std::ptrdiff_t>(smallest));
            bool ok = true;
            for (int id : victim.nodes) {
                if (!insert_best(routes, id)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                if (inst_.has_time_windows || !repack(routes))
                    throw InfeasibleError("cannot seat all customers within the fleet of " +
                                          std::to_string(inst_.fleet_size));
                return;
            }
        }
    }

    bool insert_best(std::vector<RoutePlan>& routes, int id) {
        const std::int64_t demand = inst_.nodes[static_cast<std::size_t>(id)].demand;
        double best_delta = 0;
        std::size_t best_route = routes.size();
        std::size_t best_pos = 0;
        for (std::size_t r = 0; r < routes.size(); ++r) {
            if (routes[r].load + demand > inst_.capacity) continue;
            for (std::size_t pos = 0; pos <= routes[r].nodes.size(); ++pos) {
                const int before = pos == 0 ? 0 : routes[r].nodes[pos - 1];
                const int after = pos == routes[r].nodes.size() ? 0 : routes[r].nodes[pos];
                const double delta = cost(before, id) + cost(id, after) - cost(before, after);
                if (best_route != routes.size() && delta >= best_delta) continue;
                if (inst_.has_time_windows) {
                    std::vector<int> trial = routes[r].nodes;
                    trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(pos), id);
                    if (!time_feasible(trial)) continue;
                }
                best_delta = delta;
                best_route = r;
                best_pos = pos;
            }
        }
        if (best_route == routes.size()) return false;
        routes[best_route].nodes.insert(
            routes[best_route].nodes.begin() + static_cast<std::ptrdiff_t>(best_pos), id);
        routes[best_route].load += demand;
        return true;
    }

    // Exact depth-first packing of customer demands into `fleet` bins,
    // largest demands first, bin-symmetry broken; budget-bounded.
    bool repack(std::vector<RoutePlan>& routes) {
        std::vector<int> ids;
        for (int i = 1; i <= inst_.customer_count(); ++i) ids.push_back(i);
        std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
            return inst_.nodes[static_cast<std::size_t>(a)].demand >
                   inst_.nodes[static_cast<std::size_t>(b)].demand;
        });
        const std::size_t bins = static_cast<std::size_t>(inst_.fleet_size);
        std::vector<std::int64_t> space(bins, inst_.capacity);
        std::vector<std::vector<int>> content(bins);
        std::int64_t budget = 2'000'000;

        std::function<bool(std::size_t)> place = [&](std::size_t idx) -> bool {
            if (--budget <= 0) return false;
            if (idx == ids.size()) return true;
            const std::int64_t d = inst_.nodes[static_cast<std::size_t>(ids[idx])].demand;
            std::int64_t tried = -1;
            for (std::size_t b = 0; b < bins; ++b) {
                if (space[b] < d || space[b] == tried) continue;
                tried = space[b];
                space[b] -= d;
                content[b].push_back(ids[idx]);
                if (place(idx + 1)) return true;
                content[b].pop_back();
                space[b] += d;
            }
            return false;
        };
        if (!place(0)) return false;

        routes.clear();
        for (std::size_t b = 0; b < bins; ++b) {
            if (content[b].empty()) continue;
            RoutePlan r;
            r.load = 0;
            // nearest-neighbour ordering; local search polishes afterwards
            std::vector<int> pool = content[b];
            int prev = 0;
            while (!pool.empty()) {
                std::size_t pick = 0;
                for (std::size_t i = 1; i < pool.size(); ++i)
                    if (cost(prev, pool[i]) < cost(prev, pool[pick])) pick = i;
                prev = pool[pick];
                r.nodes.push_back(prev);
                r.load += inst_.nodes[static_cast<std::size_t>(prev)].demand;
                pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
            }
            routes.push_back(std::move(r));
        }
        return true;
    }

    // First-improvement local search over relocate, exchange, intra-route
    // 2-opt and inter-route 2-opt*. Restarts the scan after every applied
    // move; never accepts a non-improving move.
    void local_search(std::vector<RoutePlan>& routes) {
        std::int64_t trials = 0;
        bool improved = true;
        while (improved && trials < params_.max_trials && !out_of_time()) {
            improved = try_relocate(routes) || try_exchange(routes) || try_two_opt(routes) ||
                       try_two_opt_star(routes);
            if (improved) ++trials;
        }
        routes.erase(std::remove_if(routes.begin(), routes.end(),
                                    [](const RoutePlan& r) { return r.nodes.empty(); }),
                     routes.end());
    }

    bool try_relocate(std::vector<RoutePlan>& routes) {
        for (std::size_t r1 = 0; r1 < routes.size(); ++r1) {
            for (std::size_t i = 0; i < routes[r1].nodes.size(); ++i) {
                const int u = routes[r1].nodes[i];
                const std::int64_t du = inst_.nodes[static_cast<std::size_t>(u)].demand;
                const int a = i == 0 ? 0 : routes[r1].nodes[i - 1];
                const int b = i + 1 == routes[r1].nodes.size() ? 0 : routes[r1].nodes[i + 1];
                const double remove_delta = cost(a, b) - cost(a, u) - cost(u, b);
                for (std::size_t r2 = 0; r2 < routes.size(); ++r2) {
                    if (r2 != r1 && routes[r2].load + du > inst_.capacity) continue;
                    for (std::size_t j = 0; j <= routes[r2].nodes.size(); ++j) {
                        if (r1 == r2 && (j == i || j == i + 1)) continue;
                        const int c = j == 0 ? 0 : routes[r2].nodes[j - 1];
                        const int e = j == routes[r2].nodes.size() ? 0 : routes[r2].nodes[j];
                        if (r1 == r2 && (c == u || e == u)) continue;
                        const double delta = remove_delta + cost(c, u) + cost(u, e) - cost(c, e);
                        if (delta >= -kEps) continue;
                        if (apply_relocate(routes, r1, i, r2, j)) return true;
                    }
                }
            }
        }
        return false;
    }

    bool apply_relocate(std::vector<RoutePlan>& routes, std::size_t r1, std::size_t i,
                        std::size_t r2, std::size_t j) {
        const int u = routes[r1].nodes[i];
        const std::int64_t du = inst_.nodes[static_cast<std::size_t>(u)].demand;
        std::vector<int> n1 = routes[r1].nodes;
        n1.erase(n1.begin() + static_cast<std::ptrdiff_t>(i));
        if (r1 == r2) {
            std::vector<int> n2 = n1;
            const std::size_t jj = j > i ? j - 1 : j;
            n2.insert(n2.begin() + static_cast<std::ptrdiff_t>(jj), u);
            if (!time_feasible(n2)) return false;
            routes[r1].nodes = std::move(n2);
            return true;
        }
        std::vector<int> n2 = routes[r2].nodes;
        n2.insert(n2.begin() + static_cast<std::ptrdiff_t>(j), u);
        if (!time_feasible(n1) || !time_feasible(n2)) return false;
        routes[r1].nodes = std::move(n1);
        routes[r1].load -= du;
        routes[r2].nodes = std::move(n2);
        routes[r2].load += du;
        return true;
    }

    bool try_exchange(std::vector<RoutePlan>& routes) {
        for (std::size_t r1 = 0; r1 + 1 < routes.size(); ++r1) {
            for (std::size_t r2 = r1 + 1; r2 < routes.size(); ++r2) {
                for (std::size_t i = 0; i < routes[r1].nodes.size(); ++i) {
                    for (std::size_t j = 0; j < routes[r2].nodes.size(); ++j) {
                        const int u = routes[r1].nodes[i];
                        const int v = routes[r2].nodes[j];
                        const std::int64_t du = inst_.nodes[static_cast<std::size_t>(u)].demand;
                        const std::int64_t dv = inst_.nodes[static_cast<std::size_t>(v)].demand;
                        if (routes[r1].load - du + dv > inst_.capacity) continue;
                        if (routes[r2].load - dv + du > inst_.capacity) continue;
                        const int a = i == 0 ? 0 : routes[r1].nodes[i - 1];
                        const int b =
                            i + 1 == routes[r1].nodes.size() ? 0 : routes[r1].nodes[i + 1];
                        const int c = j == 0 ? 0 : routes[r2].nodes[j - 1];
                        const int e =
                            j + 1 == routes[r2].nodes.size() ? 0 : routes[r2].nodes[j + 1];
                        const double delta = cost(a, v) + cost(v, b) + cost(c, u) + cost(u, e) -
                                             cost(a, u) - cost(u, b) - cost(c, v) - cost(v, e);
                        if (delta >= -kEps) continue;
                        std::vector<int> n1 = routes[r1].nodes;
                        std::vector<int> n2 = routes[r2].nodes;
                        n1[i] = v;
                        n2[j] = u;
                        if (!time_feasible(n1) || !time_feasible(n2)) continue;
                        routes[r1].nodes = std::move(n1);
                        routes[r1].load += dv - du;
                        routes[r2].nodes = std::move(n2);
                        routes[r2].load += du - dv;
                        return true;
                    }
                }
            }
        }
        return false;
    }

    bool try_two_opt(std::vector<RoutePlan>& routes) {
        for (RoutePlan& route : routes) {
            const std::size_t len = route.nodes.size();
            if (len < 3) continue;
            for (std::size_t i = 0; i + 1 < len; ++i) {
                for (std::size_t j = i + 1; j < len; ++j) {
                    if (i == 0 && j + 1 == len) continue;  // whole-route reversal is a no-op
                    const int a = i == 0 ? 0 : route.nodes[i - 1];
                    const int b = route.nodes[i];
                    const int c = route.nodes[j];
                    const int e = j + 1 == len ? 0 : route.nodes[j + 1];
                    const double delta = cost(a, c) + cost(b, e) - cost(a, b) - cost(c, e);
                    if (delta >= -kEps) continue;
                    std::vector<int> trial = route.nodes;
                    std::reverse(trial.begin() + static_cast<std::ptrdiff_t>(i),
                                 trial.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    if (!time_feasible(trial)) continue;
                    route.nodes = std::move(trial);
                    return true;
                }
            }
        }
        return false;
    }

    bool try_two_opt_star(std::vector<RoutePlan>& routes) {
        for (std::size_t r1 = 0; r1 + 1 < routes.size(); ++r1) {
            for (std::size_t r2 = r1 + 1; r2 < routes.size(); ++r2) {
                const auto& n1 = routes[r1].nodes;
                const auto& n2 = routes[r2].nodes;
                std::vector<std::int64_t> pre1 = prefix_loads(n1);
                std::vector<std::int64_t> pre2 = prefix_loads(n2);
                for (std::size_t i = 0; i <= n1.size(); ++i) {
                    for (std::size_t j = 0; j <= n2.size(); ++j) {
                        if (i == n1.size() && j == n2.size()) continue;
                        if (i == 0 && j == 0) continue;
                        const std::int64_t load_a = pre1[i] + pre2.back() - pre2[j];
                        const std::int64_t load_b = pre2[j] + pre1.back() - pre1[i];
                        if (load_a > inst_.capacity || load_b > inst_.capacity) continue;
                        const int tail1 = i == 0 ? 0 : n1[i - 1];
                        const int head1 = i == n1.size() ? 0 : n1[i];
                        const int tail2 = j == 0 ? 0 : n2[j - 1];
                        const int head2 = j == n2.size() ? 0 : n2[j];
                        const double delta = cost(tail1, head2) + cost(tail2, head1) -
                                             cost(tail1, head1) - cost(tail2, head2);
                        if (delta >= -kEps) continue;
                        std::vector<int> a(n1.begin(), n1.begin() + static_cast<std::ptrdiff_t>(i));
                        a.insert(a.end(), n2.begin() + static_cast<std::ptrdiff_t>(j), n2.end());
                        std::vector<int> b(n2.begin(), n2.begin() + static_cast<std::ptrdiff_t>(j));
                        b.insert(b.end(), n1.begin() + static_cast<std::ptrdiff_t>(i), n1.end());
                        if (!time_feasible(a) || !time_feasible(b)) continue;
                        routes[r1].nodes = std::move(a);
                        routes[r1].load = load_a;
                        routes[r2].nodes = std::move(b);
                        routes[r2].load = load_b;
                        return true;
                    }
                }
            }
        }
        return false;
    }

    static std::vector<std::int64_t> prefix_loads_impl(const VrpInstance& inst,
                                                       const std::vector<int>& nodes) {
        std::vector<std::int64_t> pre(nodes.size() + 1, 0);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            pre[i + 1] = pre[i] + inst.nodes[static_cast<std::size_t>(nodes[i])].demand;
        return pre;
    }

    std::vector<std::int64_t> prefix_loads(const std::vector<int>& nodes) const {
        return prefix_loads_impl(inst_, nodes);
    }

    // Seeded shake: a couple of random feasible relocations plus a
    // double-bridge on one longer route.
    void perturb(std::vector<RoutePlan>& routes) {
        if (routes.empty()) return;
        const int kicks = 2 + static_cast<int>(uniform_index(rng_, 2));
        for (int kick = 0; kick < kicks; ++kick) {
            const std::size_t r1 = uniform_index(rng_, routes.size());
            if (routes[r1].nodes.empty()) continue;
            const std::size_t i = uniform_index(rng_, routes[r1].nodes.size());
            const std::size_t r2 = uniform_index(rng_, routes.size());
            const std::size_t j = uniform_index(rng_, routes[r2].nodes.size() + 1);
            const int u = routes[r1].nodes[i];
            if (r2 != r1 &&
                routes[r2].load + inst_.nodes[static_cast<std::size_t>(u)].demand >
                    inst_.capacity)
                continue;
            if (r1 == r2 && (j == i || j == i + 1)) continue;
            apply_relocate(routes, r1, i, r2, j);
        }
        for (RoutePlan& route : routes) {
            if (route.nodes.size() < 4) continue;
            std::vector<int>& n = route.nodes;
            const std::size_t len = n.size();
            std::size_t p1 = 1 + uniform_index(rng_, len - 2);
            std::size_t p2 = p1 + 1 + uniform_index(rng_, len - p1 - 1);
            std::vector<int> shuffled;
            shuffled.insert(shuffled.end(), n.begin() + static_cast<std::ptrdiff_t>(p2), n.end());
            shuffled.insert(shuffled.end(), n.begin() + static_cast<std::ptrdiff_t>(p1),
                            n.begin() + static_cast<std::ptrdiff_t>(p2));
            shuffled.insert(shuffled.end(), n.begin(), n.begin() + static_cast<std::ptrdiff_t>(p1));
            if (time_feasible(shuffled)) n = std::move(shuffled);
            break;
        }
        routes.erase(std::remove_if(routes.begin(), routes.end(),
                                    [](const RoutePlan& r) { return r.nodes.empty(); }),
                     routes.end());
    }

    Solution to_solution(const std::vector<RoutePlan>& routes, double cost_value) const {
        Solution solution;
        for (const RoutePlan& plan : routes) {
            if (plan.nodes.empty()) continue;
            Route route;
            for (int id : plan.nodes)
                route.visits.push_back({id, inst_.nodes[static_cast<std::size_t>(id)].demand});
            solution.routes.push_back(std::move(route));
        }
        solution.cost = cost_value;
        return solution;
    }

    const VrpInstance& inst_;
    SolverParams params_;
    std::mt19937_64 rng_;
    std::vector<double> matrix_;
    std::chrono::steady_clock::time_point deadline_;
};

std::string resolve_external_path(const SolverParams& params) {
    if (!params.external_path.empty()) return params.external_path;
    if (const char* env = std::getenv("SDSPLIT_SOLVER"); env && *env) return env;
    return {};
}

}  // namespace

void SolverParams::check() const {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (time_limit.count() <= 0) throw std::invalid_argument("time_limit must be positive");
    if (max_trials < 1) throw std::invalid_argument("max_trials must be >= 1");
}

Solution solve_internal(const VrpInstance& instance, const SolverParams& params) {
    params.check();
    instance.check();
    Solution solution = InternalSolver(instance, params).run();
    const ValidationReport report = validate(instance, solution);
    if (!report.ok())
        throw std::logic_error("internal solver produced an invalid solution:\n" +
                               report.to_text());
    return solution;
}

SolverFiles write_solver_files(const VrpInstance& instance, const SolverParams& params,
                               const std::string& problem_path, const std::string& tour_path) {
    params.check();
    SolverFiles files;
    files.problem_text = write_tsplib(instance);

    std::ostringstream par;
    par << "PROBLEM_FILE = " << problem_path << "\n";
    par << "TOUR_FILE = " << tour_path << "\n";
    par << "RUNS = " << params.runs << "\n";
    par << "MAX_TRIALS = " << params.max_trials << "\n";
    par << "SEED = " << params.seed << "\n";
    par << "SPECIAL\n";
    par << "TIME_LIMIT = " << params.time_limit.count() << "\n";
    par << "TRACE_LEVEL = 1\n";
    files.parameter_text = par.str();
    return files;
}

Solution parse_solver_tour(const std::string& text, const VrpInstance& instance) {
    const int dimension = static_cast<int>(instance.nodes.size());
    std::istringstream in(text);
    std::string line;
    bool in_tour = false;
    std::vector<long long> sequence;
    while (std::getline(in, line)) {
        // strip comments and whitespace
        if (std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream row(line);
        if (!in_tour) {
            std::string token;
            if (row >> token && token == "TOUR_SECTION") in_tour = true;
            continue;
        }
        long long value;
        while (row >> value) sequence.push_back(value);
        std::string token;
        std::istringstream again(line);
        if (again >> token && (token == "EOF" || token == "-1")) break;
    }
    if (!in_tour) throw ExternalSolverError("tour output has no TOUR_SECTION");

    Solution solution;
    Route current;
    std::vector<bool> seen(instance.nodes.size(), false);
    for (long long raw : sequence) {
        if (raw == -1) break;
        if (raw == 1 || raw > dimension) {  // depot or a vehicle marker
            if (!current.visits.empty()) {
                solution.routes.push_back(std::move(current));
                current = Route{};
            }
            continue;
        }
        if (raw < 1) throw ExternalSolverError("unknown node id " + std::to_string(raw));
        const int node = static_cast<int>(raw) - 1;
        if (seen[static_cast<std::size_t>(node)])
            throw ExternalSolverError("node " + std::to_string(raw) + " visited twice in tour");
        seen[static_cast<std::size_t>(node)] = true;
        current.visits.push_back({node, instance.nodes[static_cast<std::size_t>(node)].demand});
    }
    if (!current.visits.empty()) solution.routes.push_back(std::move(current));
    for (int i = 1; i < dimension; ++i) {
        if (!seen[static_cast<std::size_t>(i)])
            throw ExternalSolverError("node " + std::to_string(i + 1) + " missing from tour");
    }
    solution.cost = solution_cost(instance, solution);
    return solution;
}

Solution solve(const VrpInstance& instance, const SolverParams& params) {
    params.check();
    if (params.backend == SolverBackend::internal) return solve_internal(instance, params);

    namespace fs = std::filesystem;
    const std::string solver = resolve_external_path(params);
    if (solver.empty())
        throw ExternalSolverError(
            "external solver not found: pass --solver-path or set SDSPLIT_SOLVER");
    if (!fs::exists(solver))
        throw ExternalSolverError("external solver not found at " + solver);

    fs::path dir = fs::temp_directory_path() /
                   ("sdsplit-" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    const std::string problem_path = (dir / "problem.vrp").string();
    const std::string tour_path = (dir / "out.tour").string();
    const std::string par_path = (dir / "run.par").string();
    const std::string log_path = (dir / "solver.log").string();

    const SolverFiles files = write_solver_files(instance, params, problem_path, tour_path);
    std::ofstream(problem_path) << files.problem_text;
    std::ofstream(par_path) << files.parameter_text;

    const std::string command = "\"" + solver + "\" \"" + par_path + "\" > \"" + log_path +
                                "\" 2>&1";
    const int status = std::system(command.c_str());
    if (status != 0) {
        throw ExternalSolverError("external solver exited with status " + std::to_string(status) +
                                  "; log at " + log_path);
    }
    std::ifstream tour_file(tour_path);
    if (!tour_file)
        throw ExternalSolverError("external solver wrote no tour file; log at " + log_path);
    std::stringstream tour_text;
    tour_text << tour_file.rdbuf();

    Solution solution = parse_solver_tour(tour_text.str(), instance);
    const ValidationReport report = validate(instance, solution);
    if (!report.ok())
        throw ExternalSolverError("external tour fails validation:\n" + report.to_text());
    std::error_code ec;
    fs::remove_all(dir, ec);
    return solution;
}

}  // namespace sdsplit
