#pragma once

// Executable model of the analyst-mechanism interaction on growing data: a
// dataset drawn from a finite-domain distribution is revealed one point per
// round, an analyst submits statistical queries adaptively, and a (possibly
// clipped, possibly filter-wrapped) Gaussian mechanism answers them on the
// current snapshot.  The transcript records every exchange per round.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adagrow/privacy.hpp"
#include "adagrow/rng.hpp"
#include "adagrow/schedule.hpp"

namespace adagrow {

// Finite data domain {0, ..., size-1}; labels are optional element names.
struct Domain {
    count_t size = 2;
    std::vector<std::string> labels;
};

class Distribution {
  public:
    static Distribution uniform(const Domain& dom);
    // Normalizes nonnegative finite weights with a positive sum.
    static Distribution from_weights(std::span<const double> weights);

    count_t domain_size() const { return static_cast<count_t>(pmf_.size()); }
    double prob(count_t x) const;
    std::span<const double> probs() const { return pmf_; }
    count_t sample(Rng& rng) const;  // inverse CDF; one uniform01 per draw

  private:
    std::vector<double> pmf_;
    std::vector<double> cdf_;  // cdf_.back() pinned to exactly 1
};

// Domain indices in arrival order; the round-t snapshot is the length-t
// prefix.
struct Dataset {
    std::vector<count_t> points;

    count_t size() const { return static_cast<count_t>(points.size()); }
};

Dataset sample_dataset(const Distribution& p, count_t n, Rng& rng);

// Statistical query: value per domain element in [0, 1]; the query value on a
// snapshot is the prefix mean of the per-point values.
struct StatQuery {
    std::vector<double> values;
};

// Independent fair {0,1} value per element (one RNG word each).
StatQuery random_binary_query(const Domain& dom, Rng& rng);

// Prefix mean sum_{tau <= t} values[x_tau] / t; requires 1 <= t <= |data|.
double eval_query_snapshot(const StatQuery& q, const Dataset& data, count_t t);
// Population value: dot product of the query values with the distribution.
double eval_query_dist(const StatQuery& q, const Distribution& p);

// Snapshot value plus Normal(0, sigma_t^2) noise, clamped to [0, 1] when
// clipped.  sigma_t = 0 degenerates to the exact empirical answer (no draw
// is consumed).
double gaussian_respond(const StatQuery& q, const Dataset& data, count_t t,
                        double sigma_t, Rng& rng, bool clipped);

struct Exchange {
    std::shared_ptr<const StatQuery> query;
    double response = 0.0;
};

struct Transcript {
    std::vector<std::vector<Exchange>> rounds;  // rounds[t-1] for t = 1..n
    bool terminated = false;  // a filtered mechanism refused a query

    count_t total() const;
    std::vector<count_t> per_round_counts() const;
};

// Asked once per pending decision in a round; nullopt means finished with the
// current round.
using Analyst =
    std::function<std::optional<StatQuery>(const Transcript&, count_t)>;
// nullopt means the mechanism refuses and the interaction terminates (the
// privacy-filter TERMINATE branch).
using Mechanism = std::function<std::optional<double>(
    const StatQuery&, const Dataset&, count_t, Rng&)>;

Mechanism gaussian_mechanism(double sigma, bool clipped);

// Wraps the Gaussian mechanism with a privacy filter: every answer is charged
// to `state` first and a rejected charge terminates the interaction.  The
// state is shared so the caller can inspect the spent budget afterwards.
Mechanism filtered_gaussian_mechanism(double sigma, bool clipped,
                                      std::shared_ptr<FilterState> state);

struct InteractionResult {
    Dataset data;
    Transcript transcript;
};

// Draws X ~ P^n, then for each round t = n0..n feeds the analyst until it
// passes, answering every query on the length-t prefix.  Dataset points come
// from Rng::stream(seed, 0) and response noise from Rng::stream(seed, 1), so
// runs are reproducible and the two sources never interleave.  Analyst or
// mechanism exceptions are rethrown with the round attached.
InteractionResult run_interaction(const Analyst& analyst, const Mechanism& mech,
                                  const Distribution& p, GrowthSchedule sched,
                                  std::uint64_t seed);

// Issues source(i) as the i-th query (0-based, transcript order), following
// the allocation's per-round counts.
Analyst fixed_schedule_analyst(QueryAllocation alloc,
                               std::function<StatQuery(count_t)> source);

// Sign-correlation overfitting attack: k-1 independent random binary probes
// spread evenly over rounds [n0, t_final], then one final query at
// t_final = n0 + round(final_fraction * (n - n0)) whose value at element x is
// 1 iff sum over probes of sign(response - 1/2) * probe(x) is positive.  The
// probe values are drawn from `rng`; everything else is read back from the
// transcript, so the analyst carries no other state.  Requires k >= 2.
Analyst attack_analyst(const Domain& dom, GrowthSchedule sched, count_t k,
                       double final_fraction, Rng rng);

struct ErrorCurves {
    std::vector<double> snapshot;         // [t-1]: max_j |R - Q(X_[t])|
    std::vector<double> distributional;   // [t-1]: max_j |R - Q(P^t)|
};

// Per-round worst errors of a transcript produced on `data`; rounds without
// queries report 0.
ErrorCurves empirical_errors(const Dataset& data, const Transcript& tr,
                             const Distribution& p);

struct AttackTrialResult {
    double final_response = 0.0;
    double final_truth_dist = 0.0;      // q_final(P)
    double final_truth_snapshot = 0.0;  // q_final(X_[t_final])
    double final_dist_error = 0.0;
    double final_snapshot_error = 0.0;
    count_t probes = 0;
};

// Streaming twin of run_interaction with attack_analyst: identical draw
// discipline (dataset from stream(seed, 0), noise from stream(seed, 1),
// probes from stream(seed, 2)) without storing queries, so memory stays
// O(|domain|) however large k grows.
AttackTrialResult attack_trial(const Domain& dom, GrowthSchedule sched,
                               count_t k, double final_fraction, double sigma,
                               bool clipped, const Distribution& p,
                               std::uint64_t seed);

}  // namespace adagrow
