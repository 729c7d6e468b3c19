#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdsplit {

/// Cost semantics of an instance: TSPLIB-lineage benchmarks round each edge
/// to the nearest integer, Solomon-lineage ones keep exact distances.
enum class CostRounding { nearest_int, exact };

struct TimeWindow {
    double ready = 0;
    double due = 0;
};

struct Node {
    int id = 0;  // index within the instance, 0 is the depot
    double x = 0;
    double y = 0;
    std::int64_t demand = 0;
    std::optional<TimeWindow> window;
    double service_time = 0;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VrpInstance {
    std::string name;
    std::vector<Node> nodes;  // nodes[0] is the depot
    std::int64_t capacity = 0;
    int fleet_size = 0;
    CostRounding rounding = CostRounding::nearest_int;
    bool has_time_windows = false;

    int customer_count() const { return static_cast<int>(nodes.size()) - 1; }

    /// Euclidean edge cost under the instance's rounding mode
    /// (half-up to nearest integer, or exact).
    double edge_cost(int i, int j) const;

    /// Travel time is always the exact Euclidean distance, independent of
    /// the cost rounding mode.
    double travel_time(int i, int j) const;

    /// Checks the structural invariants (depot demand 0, customer demands
    /// >= 1, windows well-formed); throws std::invalid_argument on failure.
    void check() const;
};

/// Smallest feasible fleet: ceil(sum of customer demands / capacity).
int k_min(const VrpInstance& instance);

/// Parses a TSPLIB-style CVRP file (NAME/DIMENSION/CAPACITY/
/// NODE_COORD_SECTION/DEMAND_SECTION/DEPOT_SECTION, EDGE_WEIGHT_TYPE EUC_2D
/// only). Also accepts the time-window extension (TYPE CVRPTW with
/// SERVICE_TIME_SECTION and TIME_WINDOW_SECTION). Errors carry line numbers.
VrpInstance parse_tsplib(const std::string& text);

/// Parses a Solomon-format VRPTW file. max_customers > 0 keeps only the
/// first max_customers customers; capacity_override > 0 replaces the file
/// capacity (instance names like C101.25.30 mean 25 customers, Q = 30).
/// The fleet is sized to k_min, matching how the benchmarks are run.
VrpInstance parse_solomon(const std::string& text, int max_customers = 0,
                          std::int64_t capacity_override = 0);

/// Serializes to the TSPLIB dialect parse_tsplib reads back (CVRP, or
/// CVRPTW with time-window sections).
std::string write_tsplib(const VrpInstance& instance);

/// Demand generation ranges, as fractions of capacity:
/// D1 [0.01Q, 0.1Q], D2 [0.1Q, 0.3Q], D3 [0.1Q, 0.5Q], D4 [0.1Q, 0.9Q],
/// D5 [0.3Q, 0.7Q], D6 [0.7Q, 0.9Q]; bounds are ceilings of the products.
enum class DemandRange { D1, D2, D3, D4, D5, D6 };

DemandRange demand_range_from_string(const std::string& text);

/// Copy of base with demands redrawn uniformly from the named range and
/// capacity set to `capacity` (the benchmark convention is Q = 160).
/// Deterministic per seed. The fleet is resized to k_min.
VrpInstance generate_random(const VrpInstance& base, DemandRange range, std::uint64_t seed,
                            std::int64_t capacity = 160);

struct Visit {
    int node = 0;
    std::int64_t quantity = 0;

    bool operator==(const Visit&) const = default;
};

struct Route {
    std::vector<Visit> visits;  // depot not stored; routes start and end there

    std::int64_t load() const;
    bool operator==(const Route&) const = default;
};

struct Solution {
    std::vector<Route> routes;
    double cost = 0;
};

}  // namespace sdsplit
