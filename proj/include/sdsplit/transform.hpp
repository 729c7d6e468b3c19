#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdsplit/instance.hpp"
#include "sdsplit/split_rules.hpp"

namespace sdsplit {

/// Maps expanded node ids back to (original customer, piece size). Copies
/// inherit the original's coordinates, window and service time; the pieces
/// of each customer sum to its demand.
struct OriginMap {
    struct CopyInfo {
        int origin = 0;
        std::int64_t piece = 0;
    };
    std::vector<CopyInfo> copies;             // indexed by expanded node id; [0] is the depot
    std::vector<std::vector<int>> copies_of;  // original node id -> expanded ids

    int origin_of(int expanded_node) const;
};

struct Expansion {
    VrpInstance instance;
    OriginMap origin;
};

/// Expands a split-delivery instance into an unsplittable one: each
/// customer is replaced by one copy per piece, at the same location, with
/// capacity and fleet unchanged.
Expansion expand(const VrpInstance& instance, const SplitPolicy& policy);

/// Collapses an expanded-instance solution back to the original customers:
/// visits to copies of the same customer within one route merge into a
/// single visit (at the first occurrence) with summed delivery, and the
/// cost is recomputed on the original instance.
Solution merge_back(const Solution& expanded_solution, const OriginMap& origin,
                    const VrpInstance& original);

/// Number of splits: sum over customers of (routes visiting it - 1),
/// counting only customers on two or more routes.
std::int64_t count_splits(const Solution& solution);

struct Violation {
    enum class Kind { capacity, coverage, fleet, time_window, unknown_node, delivery };
    Kind kind;
    int route = -1;  // -1 when not tied to a route
    int node = -1;   // -1 when not tied to a node
    double amount = 0;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    /// One line per violation: kind, route index, node id, amount.
    std::string to_text() const;
};

/// Checks per-route load <= Q, per-customer deliveries sum to demand,
/// route count <= fleet size, and (for time-window instances) a forward
/// time simulation with waiting on early arrival. Violations are reported,
/// not thrown.
ValidationReport validate(const VrpInstance& instance, const Solution& solution);

/// Total travel cost depot -> visits -> depot over all routes, under the
/// instance's rounding mode.
double solution_cost(const VrpInstance& instance, const Solution& solution);

/// 100 * (best - bks) / bks. Rejects bks <= 0.
double gap_percent(double best, double bks);

}  // namespace sdsplit
