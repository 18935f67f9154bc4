#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "adagrow/validate.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adagrow;
using adagrow::testutil::rel_close;

TEST_SUITE("validate") {

TEST_CASE("shipped toy instances enumerate to the expected state spaces") {
    auto toys = shipped_toy_instances();
    REQUIRE(toys.size() == 3);

    PosteriorTable t0 = enumerate_posterior(toys[0]);
    CHECK(t0.n_datasets == 1);
    CHECK(t0.n_transcripts == 3);

    PosteriorTable t1 = enumerate_posterior(toys[1]);
    CHECK(t1.n_datasets == 4);
    CHECK(t1.n_transcripts == 16);

    PosteriorTable t2 = enumerate_posterior(toys[2]);
    CHECK(t2.n_datasets == 9);
    CHECK(t2.n_transcripts == 25);
}

TEST_CASE("joint laws are normalized") {
    for (const auto& toy : shipped_toy_instances()) {
        PosteriorTable table = enumerate_posterior(toy);
        double joint_sum = 0.0;
        for (double j : table.joint) joint_sum += j;
        CHECK_MESSAGE(rel_close(joint_sum, 1.0, 1e-12), toy.name);
        double pi_sum = 0.0;
        for (double p : table.transcript_prob) pi_sum += p;
        CHECK(rel_close(pi_sum, 1.0, 1e-12));
        for (std::size_t pi = 0; pi < table.n_transcripts; ++pi) {
            if (table.transcript_prob[pi] == 0.0) continue;
            double row_sum = 0.0;
            for (double r : table.rows[pi]) row_sum += r;
            CHECK(rel_close(row_sum, 1.0, 1e-12));
        }
    }
}

TEST_CASE("resampled joints reproduce the true joint exactly") {
    for (const auto& toy : shipped_toy_instances())
        CHECK_MESSAGE(resampling_check(toy) <= 1e-12, toy.name);
}

TEST_CASE("a corrupted joint is caught by the resampling check") {
    PosteriorTable table = enumerate_posterior(shipped_toy_instances()[1]);
    table.joint[5] += 1e-6;
    CHECK(resampling_check(table) >= 1e-7);
}

TEST_CASE("oversized instances are rejected with a size report") {
    ToyInstance big;
    big.domain = {10, {}};
    big.prior = Distribution::uniform(big.domain);
    big.sched = {1, 6};  // 10^6 datasets
    big.queries.assign(3, StatQuery{std::vector<double>(10, 0.5)});
    big.query_rounds = {6, 6, 6};
    big.response_grid = {0.0, 0.5, 1.0};  // 27 transcripts: 2.7e7 states
    CHECK_THROWS_WITH_AS(enumerate_posterior(big), doctest::Contains("10^"),
                         std::invalid_argument);
}

TEST_CASE("toy instance validation rejects malformed fields") {
    ToyInstance t = shipped_toy_instances()[1];
    ToyInstance bad = t;
    bad.flip_prob = 0.0;
    CHECK_THROWS_AS(enumerate_posterior(bad), std::invalid_argument);
    bad = t;
    bad.response_grid = {0.5};
    CHECK_THROWS_AS(enumerate_posterior(bad), std::invalid_argument);
    bad = t;
    bad.response_grid = {0.5, 0.5};
    CHECK_THROWS_AS(enumerate_posterior(bad), std::invalid_argument);
    bad = t;
    bad.query_rounds = {2, 1};
    CHECK_THROWS_AS(enumerate_posterior(bad), std::invalid_argument);
    bad = t;
    bad.query_rounds = {1, 3};  // beyond n = 2
    CHECK_THROWS_AS(enumerate_posterior(bad), std::invalid_argument);
}

TEST_CASE("snapshot accuracy levels match the reference values") {
    // [ORACLE] mpmath dps=50 via tests/oracle_gen.py
    CHECK(rel_close(snapshot_alpha_exact(0.05, 20, 0.1), 0.1399605736241199,
                    1e-12));
    CHECK(rel_close(snapshot_alpha_loose(0.05, 20, 0.1), 0.14035168841719021,
                    1e-12));
    // exact is tighter but both coincide for one query
    CHECK(snapshot_alpha_exact(0.05, 20, 0.1) <
          snapshot_alpha_loose(0.05, 20, 0.1));
    CHECK(rel_close(snapshot_alpha_exact(0.1, 1, 0.05),
                    snapshot_alpha_loose(0.1, 1, 0.05), 1e-12));
    CHECK_THROWS_AS(snapshot_alpha_exact(0.1, 0, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(snapshot_alpha_exact(0.1, 5, 1.5), std::invalid_argument);
}

TEST_CASE("wilson interval matches the reference values") {
    // [ORACLE] mpmath dps=50 via tests/oracle_gen.py, z = 99% two-sided
    WilsonInterval w = wilson_interval(13, 1000);
    CHECK(rel_close(w.low, 0.006469533988079509, 1e-13));
    CHECK(rel_close(w.high, 0.025950260627838742, 1e-13));
    WilsonInterval zero = wilson_interval(0, 10000);
    CHECK(zero.low == 0.0);
    CHECK(rel_close(zero.high, 6.630497334598373e-4, 1e-13));
    WilsonInterval all = wilson_interval(50, 50);
    CHECK(all.high == 1.0);
    CHECK(all.low < 1.0);
    CHECK_THROWS_AS(wilson_interval(5, 4), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(-1, 4), std::invalid_argument);
}

TEST_CASE("boundary-biased queries hug the ends of the unit interval") {
    Domain dom{2000, {}};
    QueryMaker maker = boundary_biased_queries(dom);
    Rng rng(31);
    int near_low = 0, near_high = 0;
    for (count_t i = 0; i < 60; ++i) {
        StatQuery q = maker(i, rng);
        REQUIRE(q.values.size() == 2000);
        double mean = 0.0;
        for (double v : q.values) {
            CHECK((v == 0.0 || v == 1.0));
            mean += v;
        }
        mean /= 2000.0;
        // level <= .12 plus Bernoulli noise ~ .008: nothing lands mid-range
        if (mean < 0.2) ++near_low;
        if (mean > 0.8) ++near_high;
    }
    CHECK(near_low + near_high == 60);
    CHECK(near_low > 0);
    CHECK(near_high > 0);
}

TEST_CASE("monte carlo certification is deterministic and coherent") {
    Distribution p = Distribution::uniform({16, {}});
    QueryAllocation alloc = batch_allocation(8, 4, {20, 40});
    McAccuracy a = mc_snapshot_accuracy(p, 0.05, alloc, 0.1, 300, 99);
    McAccuracy b = mc_snapshot_accuracy(p, 0.05, alloc, 0.1, 300, 99);
    CHECK(a.failures == b.failures);
    CHECK(a.trials == 300);
    CHECK(rel_close(a.alpha, snapshot_alpha_exact(0.05, 8, 0.1), 1e-15));
    CHECK(a.rate == static_cast<double>(a.failures) / 300.0);
    CHECK(a.wilson_low <= a.rate);
    CHECK(a.rate <= a.wilson_high);
    // the certified failure budget must not be wildly exceeded even at
    // this small trial count
    CHECK(a.rate < 0.3);
    CHECK_THROWS_AS(mc_snapshot_accuracy(p, 0.05, alloc, 0.1, 50, 99),
                    std::invalid_argument);
}

TEST_CASE("conversion minimizer survives a brute-force grid audit") {
    Rng rng(1234);
    for (int i = 0; i < 8; ++i) {
        double rho = std::exp(std::log(1e-3) +
                              rng.uniform01() * std::log(1.0 / 1e-3));
        double eps = 2.0 * rng.uniform01();
        double gap = conversion_crosscheck(rho, eps);
        // Never worse than the grid; below it by at most the grid's own
        // quadratic resolution error (a few 1e-6 near sharp minima).
        CHECK_MESSAGE(gap <= 1e-6, "rho=" << rho << " eps=" << eps);
        CHECK_MESSAGE(gap >= -1e-4, "rho=" << rho << " eps=" << eps);
    }
}

TEST_CASE("slope fits recover exact power laws") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) pts.emplace_back(x, 3.0 * x * x);
    CHECK(rel_close(slope_fit(pts), 2.0, 1e-12));
    std::vector<std::pair<double, double>> inv;
    for (double x : {1.0, 3.0, 9.0}) inv.emplace_back(x, 5.0 / x);
    CHECK(rel_close(slope_fit(inv), -1.0, 1e-12));

    std::vector<std::pair<double, double>> few = {{1.0, 1.0}, {2.0, 2.0}};
    CHECK_THROWS_AS(slope_fit(few), std::invalid_argument);
    std::vector<std::pair<double, double>> bad = {{1.0, 1.0}, {2.0, -2.0},
                                                  {3.0, 1.0}};
    CHECK_THROWS_AS(slope_fit(bad), std::domain_error);
    std::vector<std::pair<double, double>> flat = {{2.0, 1.0}, {2.0, 2.0},
                                                   {2.0, 3.0}};
    CHECK_THROWS_AS(slope_fit(flat), std::domain_error);
}

}  // TEST_SUITE
