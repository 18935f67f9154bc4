#pragma once

// Growth schedules and query allocations.  A growing dataset is observed at
// rounds t = n0..n, where round t sees exactly the first t points; an
// allocation says how many queries are answered in each round.

#include <cstdint>
#include <string>
#include <vector>

namespace adagrow {

using count_t = std::int64_t;

// Dataset grows from n0 to n points, one point per round.  1 <= n0 <= n.
struct GrowthSchedule {
    count_t n0 = 1;
    count_t n = 1;
};

// per_round[t-1] queries are answered in round t; zero before n0 and the
// entries sum to total.
struct QueryAllocation {
    GrowthSchedule schedule;
    std::vector<count_t> per_round;
    count_t total = 0;
};

// Compact form of a batched allocation: sizes[j] queries at round rounds[j].
struct BatchPlan {
    GrowthSchedule schedule;
    std::vector<count_t> rounds;
    std::vector<count_t> sizes;
    count_t total = 0;
};

// Place k queries into b batches: batch j (1-based) lands at round
// n0 + floor(j (n - n0) / b), so batches are evenly spaced, the last sits
// exactly at n, and b = 1 puts everything at the final round.  Batch sizes
// are k/b rounded, the remainder spread one each over the leading batches,
// so sizes differ by at most one.
// Throws std::invalid_argument when b < 1, b > k, or b > n - n0 + 1.
BatchPlan make_batch_plan(count_t k, count_t b, GrowthSchedule sched);

// Dense allocation for the same placement.
QueryAllocation batch_allocation(count_t k, count_t b, GrowthSchedule sched);

// Recover the sparse form of any allocation (rounds with nonzero counts).
BatchPlan plan_from_allocation(const QueryAllocation& alloc);

struct AllocationReport {
    bool ok = true;
    std::string violation;  // first violated constraint when !ok
};

AllocationReport validate_allocation(const QueryAllocation& alloc);

}  // namespace adagrow
