#pragma once

// Deterministic numerical optimization used by the bound evaluators:
//  - multi-start Nelder-Mead over a box, with Latin hypercube seeding,
//  - golden-section search for one-dimensional unimodal objectives,
//  - integer bisection over a monotone predicate.
// All routines are pure functions of (objective, configuration, seed).

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "adagrow/specfun.hpp"

namespace adagrow {

// Rectangular search region.  Dimensions flagged log_scaled are optimized in
// log coordinates (lo must be positive there), which conditions parameters
// like noise scales and failure probabilities that span many decades.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<bool> log_scaled;  // empty means all linear

    std::size_t dim() const { return lo.size(); }
};

struct OptResult {
    std::vector<double> argmin;
    double value = 0.0;
    long evals = 0;
    int restarts_used = 0;
};

// Minimize f over the box with `restarts` Nelder-Mead descents seeded from a
// Latin hypercube sample drawn from `seed`.  Deterministic: identical inputs
// give bit-identical results.  Points are clamped to the box, so the argmin
// never escapes it.  Restart results are merged by (value, lexicographic
// argmin), so the reduction does not depend on evaluation order.
// Throws std::runtime_error if f is non-finite at every sampled start.
OptResult minimize_box(const std::function<double(std::span<const double>)>& f,
                       const Box& box, int restarts = 32,
                       Tolerance tol = {1e-12, 500},
                       std::uint64_t seed = 0x5eed5eedULL);

struct ScalarMin {
    double x = 0.0;
    double fx = 0.0;
    bool at_lower = false;  // minimum pinned at an interval endpoint
    bool at_upper = false;
};

// Golden-section minimization of a unimodal f on [lo, hi] down to interval
// width rel_tol * (|x| + 1).  A monotone f reports the matching endpoint.
ScalarMin unimodal_min(const std::function<double(double)>& f, double lo,
                       double hi, double rel_tol = 1e-12);

// Largest v in [lo, hi] with pred(v) true, assuming pred is monotone
// (true up to some threshold, false beyond).  Returns lo - 1 when pred(lo)
// is already false.
std::int64_t monotone_bisect(const std::function<bool(std::int64_t)>& pred,
                             std::int64_t lo, std::int64_t hi);

}  // namespace adagrow
