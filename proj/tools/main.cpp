// sdsplit: reduce split-delivery routing instances to unsplittable ones via
// minimum-size coalescing partitions, solve them, and score the results.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdsplit/partition.hpp"
#include "sdsplit/solver.hpp"
#include "sdsplit/sweep.hpp"
#include "sdsplit/transform.hpp"

using json = nlohmann::json;
using namespace sdsplit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolverFailure = 3;

std::string g_invocation;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
}

// Shared instance-loading flags: format detection, Solomon truncation and
// capacity override, cost-rounding override.
struct InstanceOptions {
    std::string path;
    int truncate = 0;
    std::int64_t capacity = 0;
    std::string rounding = "auto";

    void attach(CLI::App* cmd) {
        cmd->add_option("instance", path, "instance file (TSPLIB CVRP/CVRPTW or Solomon)")
            ->required();
        cmd->add_option("--truncate", truncate,
                        "keep only the first N customers (Solomon input)");
        cmd->add_option("--capacity", capacity, "override the vehicle capacity (Solomon input)");
        cmd->add_option("--rounding", rounding, "cost rounding: auto, nint or exact")
            ->check(CLI::IsMember({"auto", "nint", "exact"}));
    }

    VrpInstance load() const {
        const std::string text = read_file(path);
        VrpInstance inst;
        if (text.find("NODE_COORD_SECTION") != std::string::npos) {
            inst = parse_tsplib(text);
            if (truncate > 0 || capacity > 0)
                throw std::invalid_argument(
                    "--truncate/--capacity apply to Solomon inputs only");
        } else {
            inst = parse_solomon(text, truncate, capacity);
        }
        if (rounding == "nint") inst.rounding = CostRounding::nearest_int;
        if (rounding == "exact") inst.rounding = CostRounding::exact;
        return inst;
    }
};

struct PolicyOptions {
    std::string rule = "lossless";
    int k_bar = 2;
    std::string q = "0";

    void attach(CLI::App* cmd) {
        cmd->add_option("--rule", rule, "split rule: lossless, denom20 or denom25")
            ->check(CLI::IsMember({"lossless", "denom20", "denom25"}));
        cmd->add_option("--k-bar", k_bar, "max trucks per customer (lossless rule)");
        cmd->add_option("--q", q, "unsplit-threshold fraction of capacity, e.g. 0.40");
    }

    SplitPolicy policy() const {
        const Rational q_value = Rational::from_decimal(q);
        if (rule == "denom20") return SplitPolicy::denomination_20(q_value);
        if (rule == "denom25") return SplitPolicy::denomination_25(q_value);
        return SplitPolicy::lossless(k_bar, q_value);
    }
};

struct SolverOptions {
    std::uint64_t seed = 1;
    int runs = 10;
    std::int64_t max_trials = 100000;
    double time_limit = 60;
    std::string backend = "internal";
    std::string solver_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--runs", runs, "solver runs (restarts)");
        cmd->add_option("--max-trials", max_trials, "max trials per run");
        cmd->add_option("--time-limit", time_limit, "time limit in seconds");
        cmd->add_option("--backend", backend, "solver backend")
            ->check(CLI::IsMember({"internal", "external"}));
        cmd->add_option("--solver-path", solver_path,
                        "external solver binary (default: $SDSPLIT_SOLVER)");
    }

    SolverParams params() const {
        SolverParams p;
        p.seed = seed;
        p.runs = runs;
        p.max_trials = max_trials;
        p.time_limit = std::chrono::duration<double>(time_limit);
        p.backend = backend == "external" ? SolverBackend::external : SolverBackend::internal;
        p.external_path = solver_path;
        return p;
    }
};

std::optional<double> lookup_bks(const std::string& bks_flag, const std::string& bks_file,
                                 const std::string& instance_name) {
    if (!bks_flag.empty()) return std::stod(bks_flag);
    if (bks_file.empty()) return std::nullopt;
    std::ifstream in(bks_file);
    if (!in) throw std::invalid_argument("cannot open " + bks_file);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream row(line);
        std::string name, value;
        if (!std::getline(row, name, ',') || !std::getline(row, value, ',')) continue;
        if (name == instance_name) return std::stod(value);
    }
    throw std::invalid_argument("no BKS entry for '" + instance_name + "' in " + bks_file);
}

json solution_to_json(const VrpInstance& inst, const Solution& solution) {
    json routes = json::array();
    for (const Route& route : solution.routes) {
        json visits = json::array();
        for (const Visit& v : route.visits) visits.push_back({{"node", v.node}, {"qty", v.quantity}});
        routes.push_back({{"visits", visits}});
    }
    return json{{"invocation", g_invocation},
                {"instance", inst.name},
                {"cost", solution.cost},
                {"routes", routes}};
}

Solution solution_from_json(const json& j) {
    Solution solution;
    for (const auto& route_json : j.at("routes")) {
        Route route;
        for (const auto& visit : route_json.at("visits"))
            route.visits.push_back(
                {visit.at("node").get<int>(), visit.at("qty").get<std::int64_t>()});
        solution.routes.push_back(std::move(route));
    }
    solution.cost = j.value("cost", 0.0);
    return solution;
}

std::string format_fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::vector<Rational> parse_q_set(const std::string& text) {
    std::vector<Rational> qs;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) qs.push_back(Rational::from_decimal(item));
    }
    return qs;
}

std::vector<int> parse_int_set(const std::string& text) {
    std::vector<int> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) values.push_back(std::stoi(item));
    }
    return values;
}

int cmd_mscp(std::int64_t n, int k) {
    const Partition mu = mscp(n, k);
    std::string parts;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (i) parts += ' ';
        parts += std::to_string(mu.parts()[i]);
    }
    std::cout << parts << " (size " << mu.size() << ")\n";
    return kExitOk;
}

int cmd_table(std::int64_t n_max, int k_max, const std::string& format) {
    const auto table = mscp_table(n_max, k_max);
    if (format == "csv") {
        std::cout << "k";
        for (std::int64_t n = 1; n <= n_max; ++n) std::cout << ",n" << n;
        std::cout << "\n";
        for (int k = 1; k <= k_max; ++k) {
            std::cout << k;
            for (int v : table[static_cast<std::size_t>(k - 1)]) std::cout << "," << v;
            std::cout << "\n";
        }
    } else {
        std::printf("%4s", "k\\n");
        for (std::int64_t n = 1; n <= n_max; ++n) std::printf("%4lld", static_cast<long long>(n));
        std::printf("\n");
        for (int k = 1; k <= k_max; ++k) {
            std::printf("%4d", k);
            for (int v : table[static_cast<std::size_t>(k - 1)]) std::printf("%4d", v);
            std::printf("\n");
        }
    }
    return kExitOk;
}

int cmd_split(const InstanceOptions& instance_options, const PolicyOptions& policy_options,
              const std::string& out_instance, const std::string& out_origin) {
    const VrpInstance inst = instance_options.load();
    const SplitPolicy policy = policy_options.policy();
    const Expansion expansion = expand(inst, policy);

    const std::int64_t prob_size = static_cast<std::int64_t>(expansion.instance.nodes.size());
    const SplitPolicy full_policy =
        policy.kind == SplitRuleKind::lossless
            ? SplitPolicy::lossless(std::max(inst.fleet_size, 1))
            : policy;
    SplitPolicy zero_q = full_policy;
    zero_q.q = Rational(0, 1);
    const std::int64_t full_size = expanded_size(inst, zero_q);

    if (!out_instance.empty()) {
        std::string text = write_tsplib(expansion.instance);
        text.insert(text.find('\n') + 1, "COMMENT : " + g_invocation + "\n");
        write_file(out_instance, text);
    }
    if (!out_origin.empty()) {
        json copies = json::array();
        for (std::size_t id = 1; id < expansion.origin.copies.size(); ++id)
            copies.push_back({{"node", id},
                              {"origin", expansion.origin.copies[id].origin},
                              {"piece", expansion.origin.copies[id].piece}});
        const json origin_json{{"invocation", g_invocation},
                               {"instance", inst.name},
                               {"copies", copies}};
        write_file(out_origin, origin_json.dump(2) + "\n");
    }
    std::cout << "prob size " << prob_size << ", full size " << full_size << ", ratio "
              << format_fixed(100.0 * static_cast<double>(prob_size) /
                                  static_cast<double>(full_size),
                              2)
              << "%\n";
    return kExitOk;
}

int cmd_solve(const InstanceOptions& instance_options, const PolicyOptions& policy_options,
              const SolverOptions& solver_options, const std::string& bks_flag,
              const std::string& bks_file, const std::string& out_solution,
              const std::string& format) {
    const VrpInstance inst = instance_options.load();
    const SplitPolicy policy = policy_options.policy();
    const std::optional<double> bks = lookup_bks(bks_flag, bks_file, inst.name);

    const Expansion expansion = expand(inst, policy);
    const auto started = std::chrono::steady_clock::now();
    const Solution expanded_solution = solve(expansion.instance, solver_options.params());
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const Solution merged = merge_back(expanded_solution, expansion.origin, inst);

    const ValidationReport report = validate(inst, merged);
    if (!report.ok()) {
        std::cerr << "merged solution fails validation:\n" << report.to_text();
        return kExitInfeasible;
    }
    if (!out_solution.empty())
        write_file(out_solution, solution_to_json(inst, merged).dump(2) + "\n");

    SweepRecord record;
    record.instance = inst.name;
    record.k_bar = policy.k_bar;
    record.q = policy.q;
    record.prob_size = static_cast<std::int64_t>(expansion.instance.nodes.size());
    SplitPolicy full_policy = policy;
    full_policy.q = Rational(0, 1);
    if (policy.kind == SplitRuleKind::lossless)
        full_policy = SplitPolicy::lossless(std::max(inst.fleet_size, 1));
    record.full_size = expanded_size(inst, full_policy);
    record.ratio_percent =
        100.0 * static_cast<double>(record.prob_size) / static_cast<double>(record.full_size);
    record.best_cost = merged.cost;
    if (bks) record.gap_percent = gap_percent(merged.cost, *bks);
    record.time_seconds = seconds;
    record.n_splits = count_splits(merged);

    if (format == "csv") {
        std::cout << sweep_record_line(record) << "\n";
    } else {
        std::cout << "instance " << record.instance << ": cost "
                  << format_fixed(record.best_cost, 2);
        if (record.gap_percent)
            std::cout << ", gap " << format_fixed(*record.gap_percent, 3) << "%";
        std::cout << ", prob size " << record.prob_size << ", full size " << record.full_size
                  << ", ratio " << format_fixed(record.ratio_percent, 2) << "%, splits "
                  << record.n_splits << ", time " << format_fixed(record.time_seconds, 3)
                  << "s\n";
    }
    return kExitOk;
}

int cmd_sweep(const InstanceOptions& instance_options, const SolverOptions& solver_options,
              const std::string& rule, const std::string& k_bar_set, const std::string& q_set,
              const std::string& bks_flag, const std::string& bks_file, int jobs,
              const std::string& out_csv) {
    const VrpInstance inst = instance_options.load();

    SweepOptions options;
    if (rule == "denom20") options.policy = SplitPolicy::denomination_20();
    if (rule == "denom25") options.policy = SplitPolicy::denomination_25();
    options.k_bars = k_bar_set.empty() ? SweepOptions::default_k_bars() : parse_int_set(k_bar_set);
    options.qs = q_set.empty() ? SweepOptions::default_qs() : parse_q_set(q_set);
    if (options.k_bars.empty()) throw std::invalid_argument("empty k-bar set");
    if (options.qs.empty()) throw std::invalid_argument("empty q set");
    options.solver = solver_options.params();
    options.bks = lookup_bks(bks_flag, bks_file, inst.name);
    options.jobs = jobs;

    const SweepResult result = run_sweep(inst, options);
    const std::string csv = sweep_to_csv(result.records, g_invocation);
    if (out_csv.empty()) {
        std::cout << csv;
    } else {
        write_file(out_csv, csv);
    }
    const SweepRecord& best = result.records[result.best_index];
    std::cout << "best: k_bar=" << best.k_bar << " q=" << best.q.to_string() << " cost="
              << format_fixed(best.best_cost, 2) << " prob_size=" << best.prob_size << "\n";
    return kExitOk;
}

int cmd_validate(const InstanceOptions& instance_options, const std::string& solution_path) {
    const VrpInstance inst = instance_options.load();
    const json j = json::parse(read_file(solution_path));
    if (j.contains("instance") && j.at("instance").get<std::string>() != inst.name) {
        std::cerr << "solution is for instance '" << j.at("instance").get<std::string>()
                  << "', not '" << inst.name << "'\n";
        return kExitInfeasible;
    }
    const Solution solution = solution_from_json(j);
    const ValidationReport report = validate(inst, solution);
    if (!report.ok()) {
        std::cout << report.to_text();
        return kExitInfeasible;
    }
    std::cout << "ok: " << solution.routes.size() << " routes, cost "
              << format_fixed(solution_cost(inst, solution), 2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) {
        if (i) g_invocation += ' ';
        g_invocation += argv[i];
    }

    CLI::App app{"lossless demand splitting for split-delivery routing"};
    app.require_subcommand(1);

    // mscp
    auto* mscp_cmd = app.add_subcommand("mscp", "minimum-size coalescing partition of n for k");
    std::int64_t mscp_n = 0;
    int mscp_k = 0;
    mscp_cmd->add_option("n", mscp_n, "total demand")->required();
    mscp_cmd->add_option("k", mscp_k, "max parts to coalesce to")->required();

    // table
    auto* table_cmd = app.add_subcommand("table", "table of partition sizes");
    std::int64_t table_n = 20;
    int table_k = 10;
    std::string table_format = "text";
    table_cmd->add_option("n_max", table_n, "largest n (default 20)");
    table_cmd->add_option("k_max", table_k, "largest k (default 10)");
    table_cmd->add_option("--format", table_format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));

    // split
    auto* split_cmd = app.add_subcommand("split", "expand an instance under a split rule");
    InstanceOptions split_instance;
    PolicyOptions split_policy;
    std::string split_out_instance, split_out_origin;
    split_instance.attach(split_cmd);
    split_policy.attach(split_cmd);
    split_cmd->add_option("--out-instance", split_out_instance, "expanded instance file");
    split_cmd->add_option("--out-origin", split_out_origin, "origin map file (json)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "expand, solve, merge back and score");
    InstanceOptions solve_instance;
    PolicyOptions solve_policy;
    SolverOptions solve_solver;
    std::string solve_bks, solve_bks_file, solve_out, solve_format = "text";
    solve_instance.attach(solve_cmd);
    solve_policy.attach(solve_cmd);
    solve_solver.attach(solve_cmd);
    solve_cmd->add_option("--bks", solve_bks, "best known solution value");
    solve_cmd->add_option("--bks-file", solve_bks_file, "csv of instance,bks,source");
    solve_cmd->add_option("--out", solve_out, "solution file (json)");
    solve_cmd->add_option("--format", solve_format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a (k_bar, q) grid");
    InstanceOptions sweep_instance;
    SolverOptions sweep_solver;
    std::string sweep_rule = "lossless", sweep_k_bars, sweep_qs;
    std::string sweep_bks, sweep_bks_file, sweep_out;
    int sweep_jobs = 1;
    sweep_instance.attach(sweep_cmd);
    sweep_solver.attach(sweep_cmd);
    sweep_cmd->add_option("--rule", sweep_rule, "split rule")
        ->check(CLI::IsMember({"lossless", "denom20", "denom25"}));
    sweep_cmd->add_option("--k-bar-set", sweep_k_bars, "comma list, default 2..8");
    sweep_cmd->add_option("--q-set", sweep_qs, "comma list, default 0,0.05,...,1");
    sweep_cmd->add_option("--bks", sweep_bks, "best known solution value");
    sweep_cmd->add_option("--bks-file", sweep_bks_file, "csv of instance,bks,source");
    sweep_cmd->add_option("--jobs", sweep_jobs, "parallel solves");
    sweep_cmd->add_option("--out", sweep_out, "write the csv grid here");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "check a solution file");
    InstanceOptions validate_instance;
    std::string validate_solution;
    validate_instance.attach(validate_cmd);
    validate_cmd->add_option("solution", validate_solution, "solution file (json)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (mscp_cmd->parsed()) return cmd_mscp(mscp_n, mscp_k);
        if (table_cmd->parsed()) return cmd_table(table_n, table_k, table_format);
        if (split_cmd->parsed())
            return cmd_split(split_instance, split_policy, split_out_instance, split_out_origin);
        if (solve_cmd->parsed())
            return cmd_solve(solve_instance, solve_policy, solve_solver, solve_bks,
                             solve_bks_file, solve_out, solve_format);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_instance, sweep_solver, sweep_rule, sweep_k_bars, sweep_qs,
                             sweep_bks, sweep_bks_file, sweep_jobs, sweep_out);
        if (validate_cmd->parsed()) return cmd_validate(validate_instance, validate_solution);
    } catch (const ExternalSolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "bad solution file: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return kExitUsage;
}
