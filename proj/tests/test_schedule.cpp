#include <numeric>
#include <stdexcept>

#include "adagrow/schedule.hpp"
#include "doctest.h"

using namespace adagrow;

namespace {

void check_plan_invariants(const BatchPlan& plan, count_t k, count_t b) {
    REQUIRE(plan.rounds.size() == static_cast<std::size_t>(b));
    REQUIRE(plan.sizes.size() == static_cast<std::size_t>(b));
    count_t lo = plan.sizes[0], hi = plan.sizes[0], sum = 0;
    for (count_t s : plan.sizes) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        sum += s;
    }
    CHECK(sum == k);
    CHECK(hi - lo <= 1);
    CHECK(plan.rounds.front() >= plan.schedule.n0);
    CHECK(plan.rounds.back() == plan.schedule.n);
    for (std::size_t j = 1; j < plan.rounds.size(); ++j)
        CHECK(plan.rounds[j] > plan.rounds[j - 1]);
}

}  // namespace

TEST_SUITE("schedule") {

TEST_CASE("single batch lands at the final round") {
    BatchPlan plan = make_batch_plan(100, 1, {50, 150});
    CHECK(plan.rounds == std::vector<count_t>{150});
    CHECK(plan.sizes == std::vector<count_t>{100});
}

TEST_CASE("batches are evenly spaced and partition the queries") {
    BatchPlan plan = make_batch_plan(12, 3, {10, 30});
    CHECK(plan.rounds == std::vector<count_t>{16, 23, 30});
    CHECK(plan.sizes == std::vector<count_t>{4, 4, 4});

    BatchPlan uneven = make_batch_plan(10, 3, {10, 30});
    CHECK(uneven.sizes == std::vector<count_t>{4, 3, 3});
}

TEST_CASE("plan invariants hold across a parameter sweep") {
    for (count_t n0 : {1, 7, 100, 1000})
        for (count_t mult : {1, 2, 3, 10})
            for (count_t b : {1, 2, 5, 17, 64}) {
                count_t n = n0 * mult;
                if (b > n - n0 + 1) continue;
                for (count_t k : {b, 3 * b + 1, 1000 * b}) {
                    BatchPlan plan = make_batch_plan(k, b, {n0, n});
                    check_plan_invariants(plan, k, b);
                }
            }
}

TEST_CASE("maximal batch count occupies every round") {
    GrowthSchedule sched{10, 20};
    BatchPlan plan = make_batch_plan(22, 11, sched);
    for (std::size_t j = 0; j < plan.rounds.size(); ++j)
        CHECK(plan.rounds[j] == sched.n0 + static_cast<count_t>(j));
}

TEST_CASE("batch plan rejects impossible shapes") {
    CHECK_THROWS_AS(make_batch_plan(10, 0, {1, 10}), std::invalid_argument);
    CHECK_THROWS_AS(make_batch_plan(3, 4, {1, 10}), std::invalid_argument);
    CHECK_THROWS_AS(make_batch_plan(100, 12, {1, 10}), std::invalid_argument);
    CHECK_THROWS_AS(make_batch_plan(10, 1, {10, 5}), std::invalid_argument);
}

TEST_CASE("dense allocation round-trips through the sparse form") {
    for (count_t b : {1, 4, 9}) {
        QueryAllocation alloc = batch_allocation(37, b, {20, 60});
        REQUIRE(validate_allocation(alloc).ok);
        BatchPlan direct = make_batch_plan(37, b, {20, 60});
        BatchPlan recovered = plan_from_allocation(alloc);
        CHECK(recovered.rounds == direct.rounds);
        CHECK(recovered.sizes == direct.sizes);
        CHECK(recovered.total == direct.total);
    }
}

TEST_CASE("allocation validation names the violated constraint") {
    QueryAllocation alloc = batch_allocation(10, 2, {5, 10});

    QueryAllocation bad = alloc;
    bad.per_round.pop_back();
    CHECK(validate_allocation(bad).violation == "length mismatch");

    bad = alloc;
    bad.per_round[0] = 1;  // round 1 < n0 = 5
    CHECK(validate_allocation(bad).violation == "query before n0");

    bad = alloc;
    bad.per_round[6] = -2;
    CHECK(validate_allocation(bad).violation == "negative count");

    bad = alloc;
    bad.total += 1;
    CHECK(validate_allocation(bad).violation == "total mismatch");

    bad = alloc;
    bad.schedule.n0 = 0;
    CHECK(validate_allocation(bad).violation == "schedule bounds");
}

}  // TEST_SUITE
