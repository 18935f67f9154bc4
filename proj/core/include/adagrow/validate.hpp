#pragma once

// Independent correctness oracles: exact enumeration of the resampling
// identity on toy instances, Monte Carlo certification of snapshot accuracy,
// brute-force verification of the zCDP conversion minimizer, and log-log
// slope fits for scaling claims.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adagrow/interact.hpp"
#include "adagrow/privacy.hpp"
#include "adagrow/schedule.hpp"

namespace adagrow {

// Exactly enumerable interaction: a tiny domain and dataset, a fixed list of
// queries at fixed rounds, and a randomized-response mechanism over a finite
// response grid (answer the grid cell nearest the true snapshot value with
// probability 1 - flip_prob, otherwise uniformly among the other cells).
struct ToyInstance {
    std::string name;
    Domain domain;
    Distribution prior;
    GrowthSchedule sched;
    std::vector<StatQuery> queries;
    std::vector<count_t> query_rounds;  // nondecreasing, within [n0, n]
    std::vector<double> response_grid;  // strictly increasing, >= 2 cells
    double flip_prob = 0.25;
};

// Instances exercised by the validation command and the test suite.
std::vector<ToyInstance> shipped_toy_instances();

// Joint law of (dataset, transcript) and the exact posterior over datasets
// for each transcript.  Transcripts and datasets are indexed in mixed-radix
// order (first query / first point varies slowest).
struct PosteriorTable {
    std::size_t n_datasets = 0;
    std::size_t n_transcripts = 0;
    std::vector<double> joint;            // [pi * n_datasets + x]
    std::vector<double> transcript_prob;  // [pi]
    std::vector<std::vector<double>> rows;  // rows[pi][x], each sums to 1
};

// Enumerates every (dataset, transcript) pair; throws std::invalid_argument
// with a size report when the state space exceeds 10^6.
PosteriorTable enumerate_posterior(const ToyInstance& inst);

// Max over singleton events of |Pr((X, Pi) = (x, pi)) - Pr(Pi = pi) Q_pi(x)|,
// which the resampling identity makes 0 for exact tables.
double resampling_check(const PosteriorTable& table);
double resampling_check(const ToyInstance& inst);

// Per-round error bound implied by the exact max-of-Gaussians law,
// alpha = sqrt(2) sigma erfc_inv(2 - 2 (1 - beta/2)^{1/k}).
double snapshot_alpha_exact(double sigma, count_t k, double beta);
// The looser closed form sqrt(2) sigma erfc_inv(beta / k).
double snapshot_alpha_loose(double sigma, count_t k, double beta);

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval; the default z is the two-sided 99% normal quantile.
WilsonInterval wilson_interval(count_t failures, count_t trials,
                               double z = 2.5758293035489004);

using QueryMaker = std::function<StatQuery(count_t, Rng&)>;

// Random queries whose population value sits near 0 or 1: each query draws a
// level c uniform on [0, 0.12], mirrored to 1 - c on a fair coin, and sets
// each element's value to an independent Bernoulli(c).  Near the boundary
// the clipped mechanism's error is strictly smaller than the unclipped one,
// which the lemma's bound must also cover.
QueryMaker boundary_biased_queries(const Domain& dom);

struct McAccuracy {
    count_t trials = 0;
    count_t failures = 0;
    double rate = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    double alpha = 0.0;  // the certified per-round bound under test
    double beta = 0.0;
};

// Runs `trials` seeded interactions of the clipped Gaussian mechanism against
// the allocation's query schedule (queries from `maker`, default
// boundary-biased) and counts trials where any round's worst snapshot error
// exceeds snapshot_alpha_exact(sigma, total, beta).  Trials run in parallel
// on derived streams; identical (config, seed) gives identical counts.
McAccuracy mc_snapshot_accuracy(const Distribution& p, double sigma,
                                const QueryAllocation& alloc, double beta,
                                count_t trials, std::uint64_t seed,
                                const QueryMaker& maker = {});

// Signed relative gap (ours - grid) / grid between zcdp_to_approx_dp's delta
// at (rho_max, epsilon) and a 10^5-point log-spaced gamma grid minimization
// of psi.  Positive means our delta is worse than the brute-force oracle;
// negative means it beat the grid, whose own resolution near sharp minima
// (extreme gamma*) is only a few 1e-6 relative.
double conversion_crosscheck(double rho_max, double epsilon);

// Least-squares slope of log y against log x; needs >= 3 positive points.
double slope_fit(std::span<const std::pair<double, double>> points);

}  // namespace adagrow
