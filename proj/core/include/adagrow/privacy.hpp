#pragma once

// Privacy accounting on growing data.  A release's cost is tracked as a
// per-round zCDP curve rho(t); curves compose by pointwise addition and
// convert to approximate DP through the function
//   psi(g, rho, eps) = exp((g-1)(g*rho - eps)) * (1 - 1/g)^g / (g - 1),
// minimized over g > 1.  A privacy filter spends uniform budget per noisy
// release and terminates once the target is exceeded.

#include <cstdint>
#include <span>
#include <vector>

#include "adagrow/schedule.hpp"

namespace adagrow {

// rho[t-1] is the zCDP cost against the dataset state of round t.
struct RhoCurve {
    std::vector<double> rho;

    double max() const;
};

// delta[t-1] together with a shared epsilon; sum caches sum_t delta(t).
struct DeltaCurve {
    std::vector<double> delta;
    double epsilon = 0.0;
    double sum = 0.0;
    bool clamped = false;  // some entry hit the vacuous value 1
};

// Per-round cost of answering the allocation with clipped Gaussian noise of
// scale sigma[tau-1] in round tau:
//   rho(t) = sum_{tau >= t} k_tau / (2 sigma_tau^2 tau^2).
// sigma must be positive wherever the allocation is nonzero.
RhoCurve gauss_rho_curve(const QueryAllocation& alloc,
                         std::span<const double> sigma);
RhoCurve gauss_rho_curve(const QueryAllocation& alloc, double sigma);

// Pointwise sum; throws std::invalid_argument on length mismatch.
RhoCurve compose_rho(const RhoCurve& a, const RhoCurve& b);

// log psi(gamma, rho, eps); +infinity overflow is represented exactly by the
// log value.  Throws std::domain_error for gamma <= 1, rho < 0, or eps < 0.
double log_psi(double gamma, double rho, double eps);

// psi itself; returns +infinity when the value overflows a double.
double psi(double gamma, double rho, double eps);

struct GammaStar {
    double gamma = 0.0;
    double log_psi = 0.0;
    bool at_boundary = false;  // minimum ran into the search limit
};

// Minimizer of psi(., rho_max, eps) over (1, 1e6].  The objective is convex
// in gamma, so a golden-section search over log(gamma - 1) suffices.  When
// rho_max = 0 the infimum sits at gamma -> infinity; the search limit is
// returned with at_boundary set.
GammaStar gamma_star(double rho_max, double eps);

// Convert a zCDP curve to an approximate DP curve at privacy level eps:
// delta(t) = min(1, psi(g*, rho(t), eps)) with g* chosen at max_t rho(t).
DeltaCurve zcdp_to_approx_dp(const RhoCurve& rho, double eps);

// Uniform variant: every entry is replaced by the worst round first.
DeltaCurve zcdp_to_approx_dp_uniform(const RhoCurve& rho, double eps);

// Privacy filter with target budget target_rho (uniform accounting).
struct FilterState {
    double target_rho = 0.0;
    double spent_rho = 0.0;
    bool terminated = false;
};

enum class FilterDecision { approve, terminate };

// Charge one noisy release at round t with noise scale sigma: approve and
// spend 1/(2 sigma^2 t^2) iff that keeps spent <= target, else terminate
// permanently without spending, so spent_rho never exceeds target_rho.
// Charging a terminated filter throws std::logic_error.
FilterDecision filter_charge(FilterState& state, double sigma, count_t t);

}  // namespace adagrow
