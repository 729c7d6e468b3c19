#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdsplit/solver.hpp"
#include "sdsplit/split_rules.hpp"

namespace sdsplit {

/// One (k_bar, q) evaluation; fields mirror the benchmark table columns.
struct SweepRecord {
    std::string instance;
    int k_bar = 0;
    Rational q;
    std::int64_t prob_size = 0;
    std::int64_t full_size = 0;
    double ratio_percent = 0;
    double best_cost = 0;
    std::optional<double> gap_percent;
    double time_seconds = 0;
    std::int64_t n_splits = 0;
};

struct SweepOptions {
    std::vector<int> k_bars;   // default {2..8}
    std::vector<Rational> qs;  // default {0, 0.05, ..., 1.0}
    // Template for the rule; k_bar and q are overwritten per grid point.
    SplitPolicy policy;
    SolverParams solver;
    std::optional<double> bks;
    int jobs = 1;

    static std::vector<int> default_k_bars();
    static std::vector<Rational> default_qs();
};

struct SweepResult {
    std::vector<SweepRecord> records;  // sorted by (k_bar, q)
    std::size_t best_index = 0;
};

/// Runs one solve per distinct expansion: within each k_bar, q values that
/// produce identical expansions collapse to the highest q. Best record
/// selection prioritizes cost, then runtime, then smaller prob size, then
/// smaller k_bar, then larger q.
SweepResult run_sweep(const VrpInstance& instance, const SweepOptions& options);

/// CSV with the exact SweepRecord column order; header_comment lines are
/// prefixed with '#'.
std::string sweep_to_csv(const std::vector<SweepRecord>& records,
                         const std::string& header_comment = {});

std::string sweep_record_line(const SweepRecord& record);

}  // namespace sdsplit
