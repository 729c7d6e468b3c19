#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "sdsplit/instance.hpp"
#include "sdsplit/transform.hpp"

namespace sdsplit {

enum class SolverBackend { internal, external };

struct SolverParams {
    std::uint64_t seed = 1;
    int runs = 10;
    std::int64_t max_trials = 100000;
    std::chrono::duration<double> time_limit = std::chrono::seconds(60);
    SolverBackend backend = SolverBackend::internal;
    std::string external_path;  // empty: take SDSPLIT_SOLVER from the environment

    void check() const;
};

/// The instance cannot be solved within its fleet/capacity/time windows.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The external solver is missing, failed, or returned an unusable tour.
class ExternalSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Built-in deterministic heuristic: savings construction, then
/// first-improvement local search over relocate, exchange, intra-route
/// 2-opt and inter-route 2-opt* moves, restarted `runs` times from seeded
/// perturbations of the incumbent. The returned solution always validates
/// cleanly; infeasibility is reported via InfeasibleError.
Solution solve_internal(const VrpInstance& instance, const SolverParams& params);

struct SolverFiles {
    std::string problem_text;
    std::string parameter_text;
};

/// Problem and parameter file contents in the LKH-3 dialect. The problem
/// file is TSPLIB-extended (TYPE CVRP, or CVRPTW with SERVICE_TIME_SECTION
/// and TIME_WINDOW_SECTION); the parameter file sets PROBLEM_FILE, RUNS,
/// MAX_TRIALS, SEED, SPECIAL, TIME_LIMIT and TOUR_FILE.
SolverFiles write_solver_files(const VrpInstance& instance, const SolverParams& params,
                               const std::string& problem_path, const std::string& tour_path);

/// Parses an external solver's tour output (TSPLIB TOUR_SECTION; ids above
/// the dimension and the depot id both separate routes). The cost is
/// recomputed locally, never trusted from the file. A missing or unknown
/// node id throws ExternalSolverError naming the node.
Solution parse_solver_tour(const std::string& text, const VrpInstance& instance);

/// Dispatches to the internal heuristic or the external adapter; either
/// way the result is locally validated and locally costed.
Solution solve(const VrpInstance& instance, const SolverParams& params);

}  // namespace sdsplit
