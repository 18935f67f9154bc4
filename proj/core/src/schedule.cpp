#include "adagrow/schedule.hpp"

#include <numeric>
#include <stdexcept>

namespace adagrow {

namespace {

void check_schedule(GrowthSchedule s) {
    if (s.n0 < 1 || s.n0 > s.n)
        throw std::invalid_argument("schedule: need 1 <= n0 <= n");
}

}  // namespace

BatchPlan make_batch_plan(count_t k, count_t b, GrowthSchedule sched) {
    check_schedule(sched);
    if (b < 1) throw std::invalid_argument("batch plan: b must be >= 1");
    if (b > k) throw std::invalid_argument("batch plan: more batches than queries");
    if (b > sched.n - sched.n0 + 1)
        throw std::invalid_argument("batch plan: more batches than rounds");

    BatchPlan plan;
    plan.schedule = sched;
    plan.total = k;
    // Batch j (1-based) at n0 + floor(j (n - n0) / b): evenly spaced, the
    // last batch exactly at n, and b = 1 collapses to a single batch at n.
    // Integer arithmetic keeps the endpoint exact for any n.
    const count_t span = sched.n - sched.n0;
    plan.rounds.resize(b);
    for (count_t j = 1; j <= b; ++j) {
        count_t t = sched.n0 + (j * span) / b;
        if (j > 1 && t <= plan.rounds[j - 2]) t = plan.rounds[j - 2] + 1;
        plan.rounds[j - 1] = t;
    }

    const count_t base = k / b;
    const count_t rem = k % b;
    plan.sizes.assign(b, base);
    for (count_t j = 0; j < rem; ++j) ++plan.sizes[j];
    return plan;
}

QueryAllocation batch_allocation(count_t k, count_t b, GrowthSchedule sched) {
    BatchPlan plan = make_batch_plan(k, b, sched);
    QueryAllocation alloc;
    alloc.schedule = sched;
    alloc.total = k;
    alloc.per_round.assign(static_cast<std::size_t>(sched.n), 0);
    for (std::size_t j = 0; j < plan.rounds.size(); ++j)
        alloc.per_round[static_cast<std::size_t>(plan.rounds[j] - 1)] += plan.sizes[j];
    return alloc;
}

BatchPlan plan_from_allocation(const QueryAllocation& alloc) {
    BatchPlan plan;
    plan.schedule = alloc.schedule;
    plan.total = alloc.total;
    for (std::size_t i = 0; i < alloc.per_round.size(); ++i) {
        if (alloc.per_round[i] != 0) {
            plan.rounds.push_back(static_cast<count_t>(i + 1));
            plan.sizes.push_back(alloc.per_round[i]);
        }
    }
    return plan;
}

AllocationReport validate_allocation(const QueryAllocation& alloc) {
    const auto& s = alloc.schedule;
    if (s.n0 < 1 || s.n0 > s.n) return {false, "schedule bounds"};
    if (alloc.per_round.size() != static_cast<std::size_t>(s.n))
        return {false, "length mismatch"};
    for (count_t t = 1; t <= s.n; ++t) {
        count_t kt = alloc.per_round[static_cast<std::size_t>(t - 1)];
        if (kt < 0) return {false, "negative count"};
        if (kt > 0 && t < s.n0) return {false, "query before n0"};
    }
    count_t sum = std::accumulate(alloc.per_round.begin(), alloc.per_round.end(),
                                  static_cast<count_t>(0));
    if (sum != alloc.total) return {false, "total mismatch"};
    return {};
}

}  // namespace adagrow
