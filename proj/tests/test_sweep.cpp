#include <doctest.h>

#include "sdsplit/sweep.hpp"

using namespace sdsplit;

namespace {

VrpInstance toy() {
    VrpInstance inst;
    inst.name = "toy";
    inst.capacity = 10;
    Node depot;
    inst.nodes.push_back(depot);
    Node a;
    a.id = 1;
    a.x = 3;
    a.y = 4;
    a.demand = 7;
    inst.nodes.push_back(a);
    Node b;
    b.id = 2;
    b.x = 6;
    b.y = 8;
    b.demand = 5;
    inst.nodes.push_back(b);
    inst.fleet_size = k_min(inst);
    return inst;
}

}  // namespace

TEST_CASE("sweep produces one record per distinct grid point") {
    SweepOptions options;
    options.k_bars = {2, 3};
    options.qs = {Rational(0, 1), Rational(1, 2)};
    options.solver.runs = 2;
    options.bks = 30.0;

    const SweepResult result = run_sweep(toy(), options);
    REQUIRE(result.records.size() == 4);

    // sorted by (k_bar, q); prob_size non-increasing in q within each k_bar
    CHECK(result.records[0].k_bar == 2);
    CHECK(result.records[0].q == Rational(0, 1));
    CHECK(result.records[1].k_bar == 2);
    CHECK(result.records[1].q == Rational(1, 2));
    CHECK(result.records[0].prob_size >= result.records[1].prob_size);
    CHECK(result.records[2].prob_size >= result.records[3].prob_size);

    // toy expansion sizes by node count
    CHECK(result.records[0].prob_size == 7);
    CHECK(result.records[1].prob_size == 5);
    CHECK(result.records[2].prob_size == 9);  // mscp(7,3) has 4 pieces, mscp(5,3) has 4
    CHECK(result.records[3].prob_size == 6);
    for (const SweepRecord& r : result.records) {
        CHECK(r.full_size == 7);  // k_bar = fleet = 2, q = 0
        CHECK(r.best_cost == 30.0);
        REQUIRE(r.gap_percent.has_value());
        CHECK(*r.gap_percent == 0.0);
        CHECK(r.instance == "toy");
    }

    // equal cost and time: smaller prob size wins, then smaller k_bar
    CHECK(result.best_index == 1);
}

TEST_CASE("duplicate expansions collapse to the highest q") {
    SweepOptions options;
    options.k_bars = {2};
    // q = 0.8 and 1 both leave every demand whole (d_max = 7 <= 8)
    options.qs = {Rational(0, 1), Rational(4, 5), Rational(1, 1)};
    options.solver.runs = 1;

    const SweepResult result = run_sweep(toy(), options);
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].q == Rational(0, 1));
    CHECK(result.records[1].q == Rational(1, 1));
    CHECK(result.records[1].prob_size == 3);
}

TEST_CASE("sweep rejects empty grids and runs concurrently") {
    SweepOptions empty_q;
    empty_q.k_bars = {2};
    CHECK_THROWS_AS(run_sweep(toy(), empty_q), std::invalid_argument);

    SweepOptions empty_k;
    empty_k.qs = {Rational(0, 1)};
    CHECK_THROWS_AS(run_sweep(toy(), empty_k), std::invalid_argument);

    SweepOptions parallel;
    parallel.k_bars = {2, 3, 4};
    parallel.qs = SweepOptions::default_qs();
    parallel.solver.runs = 1;
    parallel.jobs = 4;
    const SweepResult result = run_sweep(toy(), parallel);
    SweepOptions serial = parallel;
    serial.jobs = 1;
    const SweepResult again = run_sweep(toy(), serial);
    REQUIRE(result.records.size() == again.records.size());
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        CHECK(result.records[i].k_bar == again.records[i].k_bar);
        CHECK(result.records[i].q == again.records[i].q);
        CHECK(result.records[i].best_cost == again.records[i].best_cost);
    }
}

TEST_CASE("csv layout is stable") {
    SweepRecord record;
    record.instance = "x";
    record.k_bar = 2;
    record.q = Rational(2, 5);
    record.prob_size = 33;
    record.full_size = 455;
    record.ratio_percent = 100.0 * 33 / 455;
    record.best_cost = 375;
    record.gap_percent = 0.0;
    record.time_seconds = 1.5;
    record.n_splits = 3;
    CHECK(sweep_record_line(record) == "x,2,0.4,33,455,7.25,375.00,0.000,1.500,3");

    record.gap_percent.reset();
    CHECK(sweep_record_line(record) == "x,2,0.4,33,455,7.25,375.00,,1.500,3");

    const std::string csv = sweep_to_csv({record}, "cmdline here");
    CHECK(csv.find("# cmdline here\n") == 0);
    CHECK(csv.find("instance,k_bar,q,prob_size,full_size,ratio_percent,best_cost,gap_percent,"
                   "time_seconds,n_splits\n") != std::string::npos);
}
