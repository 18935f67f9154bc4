#include "adagrow/interact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace adagrow {

namespace {

void check_schedule(GrowthSchedule sched) {
    if (sched.n0 < 1 || sched.n < sched.n0)
        throw std::invalid_argument("invalid growth schedule");
}

// Rounds of the attack: the final query lands at
// t_final = n0 + round(f * (n - n0)) and probe i of k-1 at
// n0 + floor(i * (t_final - n0) / (k - 1)).
count_t attack_final_round(GrowthSchedule sched, double f) {
    double span = static_cast<double>(sched.n - sched.n0);
    count_t t = sched.n0 + static_cast<count_t>(std::llround(f * span));
    return std::clamp(t, sched.n0, sched.n);
}

std::vector<count_t> attack_probe_counts(GrowthSchedule sched, count_t k,
                                         count_t t_final) {
    std::vector<count_t> at(static_cast<std::size_t>(sched.n) + 1, 0);
    for (count_t i = 0; i < k - 1; ++i)
        ++at[static_cast<std::size_t>(
            sched.n0 + i * (t_final - sched.n0) / (k - 1))];
    return at;
}

double sign_about_half(double response) {
    if (response > 0.5) return 1.0;
    if (response < 0.5) return -1.0;
    return 0.0;
}

}  // namespace

Distribution Distribution::uniform(const Domain& dom) {
    if (dom.size < 1)
        throw std::invalid_argument("Distribution: domain must be nonempty");
    std::vector<double> w(static_cast<std::size_t>(dom.size), 1.0);
    return from_weights(w);
}

Distribution Distribution::from_weights(std::span<const double> weights) {
    if (weights.empty())
        throw std::invalid_argument("Distribution: no weights");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument(
                "Distribution: weights must be nonnegative and finite");
        sum += w;
    }
    if (!(sum > 0.0))
        throw std::invalid_argument("Distribution: weights sum to zero");
    Distribution d;
    d.pmf_.reserve(weights.size());
    d.cdf_.reserve(weights.size());
    double acc = 0.0;
    for (double w : weights) {
        d.pmf_.push_back(w / sum);
        acc += w / sum;
        d.cdf_.push_back(acc);
    }
    d.cdf_.back() = 1.0;  // guard against rounding in the running sum
    return d;
}

double Distribution::prob(count_t x) const {
    if (x < 0 || x >= domain_size())
        throw std::out_of_range("Distribution: element out of range");
    return pmf_[static_cast<std::size_t>(x)];
}

count_t Distribution::sample(Rng& rng) const {
    double u = rng.uniform01();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<count_t>(it - cdf_.begin());
}

Dataset sample_dataset(const Distribution& p, count_t n, Rng& rng) {
    if (n < 0) throw std::invalid_argument("sample_dataset: negative size");
    Dataset d;
    d.points.reserve(static_cast<std::size_t>(n));
    for (count_t i = 0; i < n; ++i) d.points.push_back(p.sample(rng));
    return d;
}

StatQuery random_binary_query(const Domain& dom, Rng& rng) {
    if (dom.size < 1)
        throw std::invalid_argument("random_binary_query: empty domain");
    StatQuery q;
    q.values.reserve(static_cast<std::size_t>(dom.size));
    for (count_t x = 0; x < dom.size; ++x)
        q.values.push_back((rng.next() >> 63) ? 1.0 : 0.0);
    return q;
}

double eval_query_snapshot(const StatQuery& q, const Dataset& data, count_t t) {
    if (t < 1 || t > data.size())
        throw std::out_of_range("eval_query_snapshot: t outside 1..|data|");
    double sum = 0.0;
    for (count_t tau = 0; tau < t; ++tau) {
        count_t x = data.points[static_cast<std::size_t>(tau)];
        sum += q.values.at(static_cast<std::size_t>(x));
    }
    return sum / static_cast<double>(t);
}

double eval_query_dist(const StatQuery& q, const Distribution& p) {
    if (static_cast<count_t>(q.values.size()) != p.domain_size())
        throw std::invalid_argument("eval_query_dist: domain size mismatch");
    double sum = 0.0;
    for (std::size_t x = 0; x < q.values.size(); ++x)
        sum += q.values[x] * p.probs()[x];
    return sum;
}

double gaussian_respond(const StatQuery& q, const Dataset& data, count_t t,
                        double sigma_t, Rng& rng, bool clipped) {
    if (!(sigma_t >= 0.0))
        throw std::invalid_argument("gaussian_respond: sigma must be >= 0");
    double r = eval_query_snapshot(q, data, t);
    if (sigma_t > 0.0) r += sigma_t * rng.normal();
    if (clipped) r = std::max(0.0, std::min(r, 1.0));
    return r;
}

count_t Transcript::total() const {
    count_t k = 0;
    for (const auto& r : rounds) k += static_cast<count_t>(r.size());
    return k;
}

std::vector<count_t> Transcript::per_round_counts() const {
    std::vector<count_t> out;
    out.reserve(rounds.size());
    for (const auto& r : rounds) out.push_back(static_cast<count_t>(r.size()));
    return out;
}

Mechanism gaussian_mechanism(double sigma, bool clipped) {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("gaussian_mechanism: sigma must be >= 0");
    return [sigma, clipped](const StatQuery& q, const Dataset& data, count_t t,
                            Rng& rng) -> std::optional<double> {
        return gaussian_respond(q, data, t, sigma, rng, clipped);
    };
}

Mechanism filtered_gaussian_mechanism(double sigma, bool clipped,
                                      std::shared_ptr<FilterState> state) {
    if (!(sigma > 0.0))
        throw std::invalid_argument(
            "filtered_gaussian_mechanism: sigma must be positive");
    if (!state)
        throw std::invalid_argument(
            "filtered_gaussian_mechanism: null filter state");
    return [sigma, clipped, state](const StatQuery& q, const Dataset& data,
                                   count_t t, Rng& rng) -> std::optional<double> {
        if (state->terminated) return std::nullopt;
        if (filter_charge(*state, sigma, t) == FilterDecision::terminate)
            return std::nullopt;
        return gaussian_respond(q, data, t, sigma, rng, clipped);
    };
}

InteractionResult run_interaction(const Analyst& analyst, const Mechanism& mech,
                                  const Distribution& p, GrowthSchedule sched,
                                  std::uint64_t seed) {
    check_schedule(sched);
    Rng data_rng = Rng::stream(seed, 0);
    Rng noise_rng = Rng::stream(seed, 1);

    InteractionResult out;
    out.data = sample_dataset(p, sched.n, data_rng);
    out.transcript.rounds.resize(static_cast<std::size_t>(sched.n));

    for (count_t t = sched.n0; t <= sched.n; ++t) {
        auto& round = out.transcript.rounds[static_cast<std::size_t>(t - 1)];
        for (;;) {
            std::optional<StatQuery> q;
            try {
                q = analyst(out.transcript, t);
            } catch (const std::exception& e) {
                throw std::runtime_error("run_interaction: analyst failed in round " +
                                         std::to_string(t) + ": " + e.what());
            }
            if (!q) break;
            std::optional<double> r;
            try {
                r = mech(*q, out.data, t, noise_rng);
            } catch (const std::exception& e) {
                throw std::runtime_error(
                    "run_interaction: mechanism failed in round " +
                    std::to_string(t) + ": " + e.what());
            }
            if (!r) {  // filter refused: truncate here, nothing later runs
                out.transcript.terminated = true;
                return out;
            }
            round.push_back(
                {std::make_shared<const StatQuery>(std::move(*q)), *r});
        }
    }
    return out;
}

Analyst fixed_schedule_analyst(QueryAllocation alloc,
                               std::function<StatQuery(count_t)> source) {
    auto report = validate_allocation(alloc);
    if (!report.ok)
        throw std::invalid_argument("fixed_schedule_analyst: invalid allocation: " +
                                    report.violation);
    if (!source)
        throw std::invalid_argument("fixed_schedule_analyst: null query source");
    auto issued_total = std::make_shared<count_t>(0);
    return [alloc = std::move(alloc), source = std::move(source),
            issued_total](const Transcript& tr, count_t t) -> std::optional<StatQuery> {
        auto idx = static_cast<std::size_t>(t - 1);
        if (idx >= alloc.per_round.size()) return std::nullopt;
        count_t issued = static_cast<count_t>(tr.rounds[idx].size());
        if (issued >= alloc.per_round[idx]) return std::nullopt;
        return source((*issued_total)++);
    };
}

Analyst attack_analyst(const Domain& dom, GrowthSchedule sched, count_t k,
                       double final_fraction, Rng rng) {
    check_schedule(sched);
    if (dom.size < 1) throw std::invalid_argument("attack_analyst: empty domain");
    if (k < 2) throw std::invalid_argument("attack_analyst: k must be >= 2");
    if (!(final_fraction >= 0.0 && final_fraction <= 1.0))
        throw std::invalid_argument("attack_analyst: final_fraction in [0, 1]");

    const count_t t_final = attack_final_round(sched, final_fraction);
    auto probes_at = attack_probe_counts(sched, k, t_final);

    return [dom, probes_at = std::move(probes_at), t_final,
            rng](const Transcript& tr, count_t t) mutable
               -> std::optional<StatQuery> {
        count_t issued =
            static_cast<count_t>(tr.rounds[static_cast<std::size_t>(t - 1)].size());
        if (issued < probes_at[static_cast<std::size_t>(t)])
            return random_binary_query(dom, rng);
        if (t != t_final || issued > probes_at[static_cast<std::size_t>(t)])
            return std::nullopt;
        // Final query: overfit to the signed correlation of all responses.
        std::vector<double> score(static_cast<std::size_t>(dom.size), 0.0);
        for (const auto& round : tr.rounds)
            for (const auto& ex : round) {
                double sgn = sign_about_half(ex.response);
                const auto& v = ex.query->values;
                for (std::size_t x = 0; x < v.size(); ++x)
                    score[x] += sgn * v[x];
            }
        StatQuery q;
        q.values.reserve(score.size());
        for (double s : score) q.values.push_back(s > 0.0 ? 1.0 : 0.0);
        return q;
    };
}

ErrorCurves empirical_errors(const Dataset& data, const Transcript& tr,
                             const Distribution& p) {
    ErrorCurves out;
    out.snapshot.assign(tr.rounds.size(), 0.0);
    out.distributional.assign(tr.rounds.size(), 0.0);
    for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
        count_t t = static_cast<count_t>(i + 1);
        for (const auto& ex : tr.rounds[i]) {
            double snap = eval_query_snapshot(*ex.query, data, t);
            double dist = eval_query_dist(*ex.query, p);
            out.snapshot[i] = std::max(out.snapshot[i],
                                       std::abs(ex.response - snap));
            out.distributional[i] = std::max(out.distributional[i],
                                             std::abs(ex.response - dist));
        }
    }
    return out;
}

AttackTrialResult attack_trial(const Domain& dom, GrowthSchedule sched,
                               count_t k, double final_fraction, double sigma,
                               bool clipped, const Distribution& p,
                               std::uint64_t seed) {
    check_schedule(sched);
    if (dom.size < 1) throw std::invalid_argument("attack_trial: empty domain");
    if (k < 2) throw std::invalid_argument("attack_trial: k must be >= 2");
    if (!(final_fraction >= 0.0 && final_fraction <= 1.0))
        throw std::invalid_argument("attack_trial: final_fraction in [0, 1]");

    Rng data_rng = Rng::stream(seed, 0);
    Rng noise_rng = Rng::stream(seed, 1);
    Rng probe_rng = Rng::stream(seed, 2);

    Dataset data = sample_dataset(p, sched.n, data_rng);
    const count_t t_final = attack_final_round(sched, final_fraction);
    auto probes_at = attack_probe_counts(sched, k, t_final);

    AttackTrialResult out;
    std::vector<double> score(static_cast<std::size_t>(dom.size), 0.0);
    for (count_t t = sched.n0; t <= t_final; ++t) {
        for (count_t j = 0; j < probes_at[static_cast<std::size_t>(t)]; ++j) {
            StatQuery q = random_binary_query(dom, probe_rng);
            double r = gaussian_respond(q, data, t, sigma, noise_rng, clipped);
            double sgn = sign_about_half(r);
            for (std::size_t x = 0; x < q.values.size(); ++x)
                score[x] += sgn * q.values[x];
            ++out.probes;
        }
    }
    StatQuery fq;
    fq.values.reserve(score.size());
    for (double s : score) fq.values.push_back(s > 0.0 ? 1.0 : 0.0);
    out.final_response =
        gaussian_respond(fq, data, t_final, sigma, noise_rng, clipped);
    out.final_truth_dist = eval_query_dist(fq, p);
    out.final_truth_snapshot = eval_query_snapshot(fq, data, t_final);
    out.final_dist_error = std::abs(out.final_response - out.final_truth_dist);
    out.final_snapshot_error =
        std::abs(out.final_response - out.final_truth_snapshot);
    return out;
}

}  // namespace adagrow
