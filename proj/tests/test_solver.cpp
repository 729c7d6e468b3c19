#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sdsplit/solver.hpp"

using namespace sdsplit;

namespace {

VrpInstance make_instance(std::vector<Node> customers, std::int64_t capacity, int fleet,
                          CostRounding rounding = CostRounding::nearest_int) {
    VrpInstance inst;
    inst.name = "t";
    inst.capacity = capacity;
    inst.rounding = rounding;
    Node depot;
    inst.nodes.push_back(depot);
    for (Node& c : customers) {
        c.id = static_cast<int>(inst.nodes.size());
        inst.nodes.push_back(c);
    }
    inst.fleet_size = fleet > 0 ? fleet : k_min(inst);
    return inst;
}

Node customer(double x, double y, std::int64_t demand) {
    Node n;
    n.x = x;
    n.y = y;
    n.demand = demand;
    return n;
}

SolverParams quick_params(std::uint64_t seed = 1, int runs = 6) {
    SolverParams p;
    p.seed = seed;
    p.runs = runs;
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const std::string kDataDir = SDSPLIT_TEST_DATA_DIR;

}  // namespace

TEST_CASE("single customer gives an out-and-back route") {
    const VrpInstance inst = make_instance({customer(3, 4, 5)}, 10, 0);
    const Solution sol = solve_internal(inst, quick_params());
    REQUIRE(sol.routes.size() == 1);
    REQUIRE(sol.routes[0].visits.size() == 1);
    CHECK(sol.routes[0].visits[0] == Visit{1, 5});
    CHECK(sol.cost == 10);
}

TEST_CASE("square corners around a central depot solve to the optimal loop") {
    VrpInstance inst = make_instance({customer(10, 10, 1), customer(-10, 10, 1),
                                      customer(-10, -10, 1), customer(10, -10, 1)},
                                     10, 1);
    inst.nodes[0].x = 0;
    inst.nodes[0].y = 0;
    const Solution sol = solve_internal(inst, quick_params());
    const auto oracle = oracles::cvrp_optimum(inst);
    REQUIRE(oracle.has_value());
    CHECK(sol.cost == doctest::Approx(oracle->cost));
    REQUIRE(sol.routes.size() == 1);
    CHECK(sol.routes[0].visits.size() == 4);
}

TEST_CASE("expanded two-customer toy reaches the exhaustive optimum") {
    const VrpInstance base = make_instance({customer(3, 4, 7), customer(6, 8, 5)}, 10, 0);
    const Expansion expansion = expand(base, SplitPolicy::lossless(2));
    const Solution sol = solve_internal(expansion.instance, quick_params());
    CHECK(validate(expansion.instance, sol).ok());
    const auto oracle = oracles::cvrp_optimum(expansion.instance);
    REQUIRE(oracle.has_value());
    CHECK(sol.cost == doctest::Approx(oracle->cost));
    const Solution merged = merge_back(sol, expansion.origin, base);
    CHECK(validate(base, merged).ok());
}

TEST_CASE("internal solver is deterministic per seed") {
    std::mt19937_64 rng(7);
    std::vector<Node> customers;
    for (int i = 0; i < 9; ++i)
        customers.push_back(customer(static_cast<double>(rng() % 40),
                                     static_cast<double>(rng() % 40),
                                     1 + static_cast<std::int64_t>(rng() % 8)));
    const VrpInstance inst = make_instance(customers, 15, 0);
    const Solution a = solve_internal(inst, quick_params(123));
    const Solution b = solve_internal(inst, quick_params(123));
    CHECK(a.cost == b.cost);
    REQUIRE(a.routes.size() == b.routes.size());
    for (std::size_t r = 0; r < a.routes.size(); ++r) CHECK(a.routes[r] == b.routes[r]);
}

TEST_CASE("internal solver reports infeasibility") {
    // fleet smaller than k_min
    VrpInstance inst = make_instance({customer(1, 0, 9), customer(2, 0, 9)}, 10, 1);
    CHECK_THROWS_AS(solve_internal(inst, quick_params()), InfeasibleError);
    // a demand above capacity cannot be seated at all
    VrpInstance big = make_instance({customer(1, 0, 12)}, 10, 3);
    CHECK_THROWS_AS(solve_internal(big, quick_params()), InfeasibleError);
}

TEST_CASE("internal solver matches the exhaustive optimum on at least 90 of 100 toys") {
    std::mt19937_64 rng(20240817);
    int feasible = 0, matched = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 4);  // 4..7 customers
        std::vector<Node> customers;
        for (int i = 0; i < n; ++i)
            customers.push_back(customer(static_cast<double>(rng() % 60),
                                         static_cast<double>(rng() % 60),
                                         1 + static_cast<std::int64_t>(rng() % 9)));
        const std::int64_t capacity = 10 + static_cast<std::int64_t>(rng() % 11);
        const VrpInstance inst = make_instance(customers, capacity, 0);
        const auto oracle = oracles::cvrp_optimum(inst);
        if (!oracle) {
            CHECK_THROWS_AS(solve_internal(inst, quick_params(trial + 1, 8)), InfeasibleError);
            continue;
        }
        ++feasible;
        Solution sol;
        REQUIRE_NOTHROW(sol = solve_internal(inst, quick_params(trial + 1, 8)));
        CHECK(validate(inst, sol).ok());
        CHECK(sol.cost >= oracle->cost - 1e-9);  // the oracle is a true optimum
        if (sol.cost <= oracle->cost + 1e-9) ++matched;
    }
    REQUIRE(feasible >= 50);
    // first-improvement search with seeded restarts finds the optimum on
    // at least 90% of the feasible toys
    CHECK(matched * 10 >= feasible * 9);
}

TEST_CASE("internal solver handles time windows") {
    const VrpInstance inst = parse_solomon(read_file(kDataDir + "/toy_solomon.txt"), 0, 60);
    const Solution sol = solve_internal(inst, quick_params());
    CHECK(validate(inst, sol).ok());
    CHECK(sol.cost > 0);
}

TEST_CASE("write_solver_files emits the LKH dialect") {
    const VrpInstance base = make_instance({customer(3, 4, 7), customer(6, 8, 5)}, 10, 0);
    SolverParams params = quick_params();
    params.runs = 10;
    params.max_trials = 5000;
    params.seed = 99;
    params.time_limit = std::chrono::seconds(30);
    const SolverFiles files = write_solver_files(base, params, "/tmp/p.vrp", "/tmp/t.tour");

    CHECK(files.problem_text.find("TYPE : CVRP\n") != std::string::npos);
    CHECK(files.problem_text.find("DIMENSION : 3") != std::string::npos);
    CHECK(files.problem_text.find("VEHICLES : 2") != std::string::npos);
    CHECK(files.problem_text.find("TIME_WINDOW_SECTION") == std::string::npos);
    CHECK(files.problem_text.find("SERVICE_TIME_SECTION") == std::string::npos);

    CHECK(files.parameter_text.find("PROBLEM_FILE = /tmp/p.vrp") != std::string::npos);
    CHECK(files.parameter_text.find("TOUR_FILE = /tmp/t.tour") != std::string::npos);
    CHECK(files.parameter_text.find("RUNS = 10") != std::string::npos);
    CHECK(files.parameter_text.find("MAX_TRIALS = 5000") != std::string::npos);
    CHECK(files.parameter_text.find("SEED = 99") != std::string::npos);
    CHECK(files.parameter_text.find("SPECIAL\n") != std::string::npos);
    CHECK(files.parameter_text.find("TIME_LIMIT = 30") != std::string::npos);

    const VrpInstance tw = parse_solomon(read_file(kDataDir + "/toy_solomon.txt"));
    const SolverFiles tw_files = write_solver_files(tw, params, "p", "t");
    CHECK(tw_files.problem_text.find("TYPE : CVRPTW\n") != std::string::npos);
    CHECK(tw_files.problem_text.find("TIME_WINDOW_SECTION") != std::string::npos);
    CHECK(tw_files.problem_text.find("SERVICE_TIME_SECTION") != std::string::npos);
}

TEST_CASE("parse_solver_tour splits routes at depot markers") {
    const VrpInstance base = make_instance(
        {customer(3, 4, 7), customer(6, 8, 5), customer(0, 5, 3)}, 10, 2);
    // dimension 4; ids 5+ are vehicle markers, id 1 is the depot
    const std::string tour_text =
        "NAME : t.tour\nTYPE : TOUR\nDIMENSION : 4\nTOUR_SECTION\n"
        "1\n2\n4\n5\n3\n-1\nEOF\n";
    const Solution sol = parse_solver_tour(tour_text, base);
    REQUIRE(sol.routes.size() == 2);
    CHECK(sol.routes[0].visits.size() == 2);
    CHECK(sol.routes[0].visits[0] == Visit{1, 7});
    CHECK(sol.routes[0].visits[1] == Visit{3, 3});
    CHECK(sol.routes[1].visits.size() == 1);
    CHECK(sol.routes[1].visits[0] == Visit{2, 5});
    CHECK(sol.cost == solution_cost(base, sol));

    const std::string missing =
        "TOUR_SECTION\n1\n2\n3\n-1\n";  // node 4 absent
    CHECK_THROWS_WITH_AS(parse_solver_tour(missing, base), doctest::Contains("missing"),
                         ExternalSolverError);
    const std::string duplicate = "TOUR_SECTION\n1\n2\n2\n3\n4\n-1\n";
    CHECK_THROWS_WITH_AS(parse_solver_tour(duplicate, base), doctest::Contains("twice"),
                         ExternalSolverError);
    CHECK_THROWS_AS(parse_solver_tour("no sections here\n", base), ExternalSolverError);
}

TEST_CASE("tour round trip through the file dialect") {
    const VrpInstance base = make_instance(
        {customer(3, 4, 7), customer(6, 8, 5), customer(9, 1, 3)}, 10, 2);
    const Solution sol = solve_internal(base, quick_params());
    // write the tour the way an external solver would
    std::ostringstream tour;
    tour << "TOUR_SECTION\n";
    long long marker = static_cast<long long>(base.nodes.size()) + 1;
    bool first = true;
    for (const Route& route : sol.routes) {
        if (!first) tour << marker++ << "\n";
        first = false;
        for (const Visit& v : route.visits) tour << (v.node + 1) << "\n";
    }
    tour << "-1\nEOF\n";
    const Solution parsed = parse_solver_tour(tour.str(), base);
    CHECK(parsed.cost == doctest::Approx(sol.cost));
    CHECK(validate(base, parsed).ok());
}

TEST_CASE("solve dispatches and reports a missing external binary") {
    const VrpInstance base = make_instance({customer(3, 4, 7)}, 10, 0);
    SolverParams params = quick_params();
    params.backend = SolverBackend::external;
    params.external_path = "/nonexistent/solver-binary";
    CHECK_THROWS_WITH_AS(solve(base, params), doctest::Contains("not found"),
                         ExternalSolverError);

    params.backend = SolverBackend::internal;
    const Solution sol = solve(base, params);
    CHECK(validate(base, sol).ok());
}
