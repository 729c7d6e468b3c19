#include "sdsplit/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace sdsplit {

namespace {

SplitPolicy make_policy(const SplitPolicy& base, int k_bar, Rational q) {
    SplitPolicy policy = base;
    policy.k_bar = k_bar;
    policy.q = q;
    policy.check();
    return policy;
}

std::string format_double(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// Identity of an expansion: the piece list of every customer.
std::vector<std::int64_t> expansion_signature(const VrpInstance& instance,
                                              const SplitPolicy& policy) {
    std::vector<std::int64_t> signature;
    for (std::size_t i = 1; i < instance.nodes.size(); ++i) {
        const Partition pieces =
            split_demand(instance.nodes[i].demand, instance.capacity, policy);
        signature.insert(signature.end(), pieces.parts().begin(), pieces.parts().end());
        signature.push_back(-1);  // per-customer separator
    }
    return signature;
}

bool record_better(const SweepRecord& a, const SweepRecord& b) {
    if (a.best_cost != b.best_cost) return a.best_cost < b.best_cost;
    // runtime at the published resolution, so sub-millisecond jitter
    // cannot flip the choice between equal-quality points
    const double ta = std::round(a.time_seconds * 1000);
    const double tb = std::round(b.time_seconds * 1000);
    if (ta != tb) return ta < tb;
    if (a.prob_size != b.prob_size) return a.prob_size < b.prob_size;
    if (a.k_bar != b.k_bar) return a.k_bar < b.k_bar;
    return b.q < a.q;  // larger q wins the final tie
}

}  // namespace

std::vector<int> SweepOptions::default_k_bars() { return {2, 3, 4, 5, 6, 7, 8}; }

std::vector<Rational> SweepOptions::default_qs() {
    std::vector<Rational> qs;
    for (int i = 0; i <= 20; ++i) qs.push_back(Rational(i * 5, 100));
    return qs;
}

SweepResult run_sweep(const VrpInstance& instance, const SweepOptions& options) {
    if (options.k_bars.empty()) throw std::invalid_argument("empty k_bar set");
    if (options.qs.empty()) throw std::invalid_argument("empty q set");

    std::vector<Rational> qs = options.qs;
    std::sort(qs.begin(), qs.end());
    std::vector<int> k_bars = options.k_bars;
    std::sort(k_bars.begin(), k_bars.end());

    // Full size is the k_bar = fleet, q = 0 expansion.
    const std::int64_t full_size =
        expanded_size(instance, make_policy(options.policy, std::max(instance.fleet_size, 1), {}));

    // Collapse q values that give the same expansion to the highest q,
    // within each k_bar.
    struct Task {
        int k_bar;
        Rational q;
    };
    std::vector<Task> tasks;
    for (int k_bar : k_bars) {
        std::map<std::vector<std::int64_t>, Rational> by_signature;
        for (const Rational& q : qs) {
            const SplitPolicy policy = make_policy(options.policy, k_bar, q);
            by_signature[expansion_signature(instance, policy)] = q;  // ascending: last wins
        }
        for (const auto& [signature, q] : by_signature) tasks.push_back({k_bar, q});
    }

    std::vector<SweepRecord> records(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::size_t next_task = 0;
    std::mutex gate;

    auto worker = [&]() {
        for (;;) {
            std::size_t index;
            {
                std::lock_guard lock(gate);
                if (next_task == tasks.size()) return;
                index = next_task++;
            }
            const Task& task = tasks[index];
            SweepRecord record;
            record.instance = instance.name;
            record.k_bar = task.k_bar;
            record.q = task.q;
            record.full_size = full_size;
            try {
                const SplitPolicy policy = make_policy(options.policy, task.k_bar, task.q);
                const Expansion expansion = expand(instance, policy);
                record.prob_size = static_cast<std::int64_t>(expansion.instance.nodes.size());
                record.ratio_percent =
                    100.0 * static_cast<double>(record.prob_size) / static_cast<double>(full_size);
                const auto started = std::chrono::steady_clock::now();
                const Solution expanded_solution = solve(expansion.instance, options.solver);
                record.time_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                        .count();
                const Solution merged =
                    merge_back(expanded_solution, expansion.origin, instance);
                record.best_cost = merged.cost;
                record.n_splits = count_splits(merged);
                if (options.bks) record.gap_percent = gap_percent(merged.cost, *options.bks);
            } catch (const std::exception& e) {
                errors[index] = e.what();
            }
            records[index] = std::move(record);
        }
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty())
            throw std::runtime_error("sweep point (k_bar=" + std::to_string(tasks[i].k_bar) +
                                     ", q=" + tasks[i].q.to_string() + ") failed: " + errors[i]);
    }

    std::stable_sort(records.begin(), records.end(),
                     [](const SweepRecord& a, const SweepRecord& b) {
                         if (a.k_bar != b.k_bar) return a.k_bar < b.k_bar;
                         return a.q < b.q;
                     });

    SweepResult result;
    result.records = std::move(records);
    result.best_index = 0;
    for (std::size_t i = 1; i < result.records.size(); ++i) {
        if (record_better(result.records[i], result.records[result.best_index]))
            result.best_index = i;
    }
    return result;
}

std::string sweep_record_line(const SweepRecord& r) {
    std::ostringstream out;
    out << r.instance << "," << r.k_bar << "," << r.q.to_string() << "," << r.prob_size << ","
        << r.full_size << "," << format_double(r.ratio_percent, 2) << ","
        << format_double(r.best_cost, 2) << ","
        << (r.gap_percent ? format_double(*r.gap_percent, 3) : std::string()) << ","
        << format_double(r.time_seconds, 3) << "," << r.n_splits;
    return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records,
                         const std::string& header_comment) {
    std::ostringstream out;
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "instance,k_bar,q,prob_size,full_size,ratio_percent,best_cost,gap_percent,"
           "time_seconds,n_splits\n";
    for (const SweepRecord& r : records) out << sweep_record_line(r) << "\n";
    return out.str();
}

}  // namespace sdsplit
