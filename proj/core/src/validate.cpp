#include "adagrow/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "adagrow/parallel.hpp"
#include "adagrow/specfun.hpp"

namespace adagrow {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr std::size_t kMaxStates = 1000000;

std::size_t pow_size(std::size_t base, count_t exp) {
    std::size_t v = 1;
    for (count_t i = 0; i < exp; ++i) {
        if (v > kMaxStates) return kMaxStates + 1;  // caller reports overflow
        v *= base;
    }
    return v;
}

void check_toy(const ToyInstance& inst) {
    if (inst.domain.size < 1)
        throw std::invalid_argument("toy instance: empty domain");
    if (inst.sched.n0 < 1 || inst.sched.n < inst.sched.n0)
        throw std::invalid_argument("toy instance: invalid schedule");
    if (inst.prior.domain_size() != inst.domain.size)
        throw std::invalid_argument("toy instance: prior/domain size mismatch");
    if (inst.queries.size() != inst.query_rounds.size())
        throw std::invalid_argument("toy instance: query/round list mismatch");
    for (std::size_t i = 0; i < inst.query_rounds.size(); ++i) {
        count_t t = inst.query_rounds[i];
        if (t < inst.sched.n0 || t > inst.sched.n)
            throw std::invalid_argument("toy instance: query round outside [n0, n]");
        if (i > 0 && t < inst.query_rounds[i - 1])
            throw std::invalid_argument("toy instance: query rounds must be nondecreasing");
        if (static_cast<count_t>(inst.queries[i].values.size()) != inst.domain.size)
            throw std::invalid_argument("toy instance: query/domain size mismatch");
    }
    if (inst.response_grid.size() < 2)
        throw std::invalid_argument("toy instance: response grid needs >= 2 cells");
    for (std::size_t j = 1; j < inst.response_grid.size(); ++j)
        if (!(inst.response_grid[j] > inst.response_grid[j - 1]))
            throw std::invalid_argument(
                "toy instance: response grid must be strictly increasing");
    if (!(inst.flip_prob > 0.0 && inst.flip_prob < 1.0))
        throw std::invalid_argument("toy instance: flip_prob must be in (0, 1)");
}

std::size_t nearest_cell(const std::vector<double>& grid, double v) {
    std::size_t best = 0;
    double best_d = std::abs(v - grid[0]);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        double d = std::abs(v - grid[j]);
        if (d < best_d) {  // ties keep the lowest index
            best_d = d;
            best = j;
        }
    }
    return best;
}

}  // namespace

std::vector<ToyInstance> shipped_toy_instances() {
    std::vector<ToyInstance> out;

    {  // Degenerate single-element domain: the posterior must be a point mass.
        ToyInstance t;
        t.name = "point-domain";
        t.domain = {1, {}};
        t.prior = Distribution::uniform(t.domain);
        t.sched = {1, 1};
        t.queries = {StatQuery{{0.7}}};
        t.query_rounds = {1};
        t.response_grid = {0.0, 0.5, 1.0};
        t.flip_prob = 0.3;
        out.push_back(std::move(t));
    }
    {  // Binary domain, two rounds, two queries answered at different rounds.
        ToyInstance t;
        t.name = "binary-two-round";
        t.domain = {2, {}};
        double w[] = {0.6, 0.4};
        t.prior = Distribution::from_weights(w);
        t.sched = {1, 2};
        t.queries = {StatQuery{{0.0, 1.0}}, StatQuery{{1.0, 0.0}}};
        t.query_rounds = {1, 2};
        t.response_grid = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
        t.flip_prob = 0.25;
        out.push_back(std::move(t));
    }
    {  // Ternary skewed prior with non-indicator queries.
        ToyInstance t;
        t.name = "ternary-skewed";
        t.domain = {3, {}};
        double w[] = {0.5, 0.3, 0.2};
        t.prior = Distribution::from_weights(w);
        t.sched = {2, 2};
        t.queries = {StatQuery{{0.0, 0.5, 1.0}}, StatQuery{{1.0, 0.0, 0.25}}};
        t.query_rounds = {2, 2};
        t.response_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
        t.flip_prob = 0.1;
        out.push_back(std::move(t));
    }
    return out;
}

PosteriorTable enumerate_posterior(const ToyInstance& inst) {
    check_toy(inst);
    const auto nx = static_cast<std::size_t>(inst.domain.size);
    const auto n = inst.sched.n;
    const std::size_t m = inst.response_grid.size();
    const auto kq = static_cast<count_t>(inst.queries.size());
    const std::size_t n_data = pow_size(nx, n);
    const std::size_t n_pi = pow_size(m, kq);
    if (n_data > kMaxStates || n_pi > kMaxStates || n_data > kMaxStates / n_pi)
        throw std::invalid_argument(
            "enumerate_posterior: state space too large: " +
            std::to_string(nx) + "^" + std::to_string(n) + " datasets x " +
            std::to_string(m) + "^" + std::to_string(kq) + " transcripts");

    PosteriorTable table;
    table.n_datasets = n_data;
    table.n_transcripts = n_pi;
    table.joint.assign(n_data * n_pi, 0.0);
    table.transcript_prob.assign(n_pi, 0.0);

    const double flip = inst.flip_prob;
    const double keep = 1.0 - flip;
    const double other = flip / static_cast<double>(m - 1);

    Dataset data;
    data.points.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t dx = 0; dx < n_data; ++dx) {
        // Mixed-radix decode: the first point varies slowest.
        std::size_t rem = dx;
        for (count_t i = n; i-- > 0;) {
            data.points[static_cast<std::size_t>(i)] =
                static_cast<count_t>(rem % nx);
            rem /= nx;
        }
        double px = 1.0;
        for (count_t i = 0; i < n; ++i)
            px *= inst.prior.prob(data.points[static_cast<std::size_t>(i)]);

        // Per-query nearest grid cell for this dataset.
        std::vector<std::size_t> star(static_cast<std::size_t>(kq));
        for (count_t i = 0; i < kq; ++i) {
            double v = eval_query_snapshot(inst.queries[static_cast<std::size_t>(i)],
                                           data,
                                           inst.query_rounds[static_cast<std::size_t>(i)]);
            star[static_cast<std::size_t>(i)] = nearest_cell(inst.response_grid, v);
        }

        for (std::size_t pi = 0; pi < n_pi; ++pi) {
            std::size_t rem_pi = pi;
            double ppi = 1.0;
            for (count_t i = kq; i-- > 0;) {
                std::size_t cell = rem_pi % m;
                rem_pi /= m;
                ppi *= cell == star[static_cast<std::size_t>(i)] ? keep : other;
            }
            double j = px * ppi;
            table.joint[pi * n_data + dx] = j;
            table.transcript_prob[pi] += j;
        }
    }

    table.rows.assign(n_pi, std::vector<double>(n_data, 0.0));
    for (std::size_t pi = 0; pi < n_pi; ++pi) {
        double p = table.transcript_prob[pi];
        if (p <= 0.0) continue;  // unreachable transcript: row left at zero
        for (std::size_t dx = 0; dx < n_data; ++dx)
            table.rows[pi][dx] = table.joint[pi * n_data + dx] / p;
    }
    return table;
}

double resampling_check(const PosteriorTable& table) {
    double worst = 0.0;
    for (std::size_t pi = 0; pi < table.n_transcripts; ++pi)
        for (std::size_t dx = 0; dx < table.n_datasets; ++dx) {
            double resampled = table.transcript_prob[pi] * table.rows[pi][dx];
            worst = std::max(worst,
                             std::abs(table.joint[pi * table.n_datasets + dx] -
                                      resampled));
        }
    return worst;
}

double resampling_check(const ToyInstance& inst) {
    return resampling_check(enumerate_posterior(inst));
}

double snapshot_alpha_exact(double sigma, count_t k, double beta) {
    if (k < 1) throw std::invalid_argument("snapshot_alpha_exact: k >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("snapshot_alpha_exact: beta in (0, 1)");
    if (!(sigma >= 0.0))
        throw std::invalid_argument("snapshot_alpha_exact: sigma >= 0");
    // 2 - 2 (1 - beta/2)^{1/k}, evaluated without cancellation
    double arg = -2.0 * std::expm1(std::log1p(-0.5 * beta) /
                                   static_cast<double>(k));
    return kSqrt2 * sigma * erfc_inv(arg);
}

double snapshot_alpha_loose(double sigma, count_t k, double beta) {
    if (k < 1) throw std::invalid_argument("snapshot_alpha_loose: k >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("snapshot_alpha_loose: beta in (0, 1)");
    if (!(sigma >= 0.0))
        throw std::invalid_argument("snapshot_alpha_loose: sigma >= 0");
    return kSqrt2 * sigma * erfc_inv(beta / static_cast<double>(k));
}

WilsonInterval wilson_interval(count_t failures, count_t trials, double z) {
    if (trials < 1 || failures < 0 || failures > trials)
        throw std::invalid_argument("wilson_interval: need 0 <= failures <= trials");
    if (!(z > 0.0)) throw std::invalid_argument("wilson_interval: z must be > 0");
    double nt = static_cast<double>(trials);
    double p = static_cast<double>(failures) / nt;
    double z2 = z * z;
    double denom = 1.0 + z2 / nt;
    double center = p + z2 / (2.0 * nt);
    double spread = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
    WilsonInterval w;
    w.low = std::max(0.0, (center - spread) / denom);
    w.high = std::min(1.0, (center + spread) / denom);
    return w;
}

QueryMaker boundary_biased_queries(const Domain& dom) {
    if (dom.size < 1)
        throw std::invalid_argument("boundary_biased_queries: empty domain");
    count_t size = dom.size;
    return [size](count_t, Rng& rng) {
        double level = 0.12 * rng.uniform01();
        if (rng.next() >> 63) level = 1.0 - level;
        StatQuery q;
        q.values.reserve(static_cast<std::size_t>(size));
        for (count_t x = 0; x < size; ++x)
            q.values.push_back(rng.uniform01() < level ? 1.0 : 0.0);
        return q;
    };
}

McAccuracy mc_snapshot_accuracy(const Distribution& p, double sigma,
                                const QueryAllocation& alloc, double beta,
                                count_t trials, std::uint64_t seed,
                                const QueryMaker& maker) {
    if (trials < 100)
        throw std::invalid_argument("mc_snapshot_accuracy: trials must be >= 100");
    if (!(sigma > 0.0))
        throw std::invalid_argument("mc_snapshot_accuracy: sigma must be > 0");
    auto report = validate_allocation(alloc);
    if (!report.ok)
        throw std::invalid_argument("mc_snapshot_accuracy: invalid allocation: " +
                                    report.violation);
    if (alloc.total < 1)
        throw std::invalid_argument("mc_snapshot_accuracy: allocation has no queries");

    QueryMaker make =
        maker ? maker : boundary_biased_queries(Domain{p.domain_size(), {}});
    const double alpha = snapshot_alpha_exact(sigma, alloc.total, beta);
    const Mechanism mech = gaussian_mechanism(sigma, /*clipped=*/true);

    std::vector<char> failed(static_cast<std::size_t>(trials), 0);
    parallel_for(trials, [&](std::int64_t i) {
        std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(i));
        Rng qrng = Rng::stream(ts, 2);
        Analyst analyst = fixed_schedule_analyst(
            alloc, [&](count_t qi) { return make(qi, qrng); });
        InteractionResult res =
            run_interaction(analyst, mech, p, alloc.schedule, ts);
        ErrorCurves errs = empirical_errors(res.data, res.transcript, p);
        for (double e : errs.snapshot)
            if (e > alpha) {
                failed[static_cast<std::size_t>(i)] = 1;
                break;
            }
    });

    McAccuracy out;
    out.trials = trials;
    for (char f : failed) out.failures += f;
    out.rate = static_cast<double>(out.failures) / static_cast<double>(trials);
    WilsonInterval w = wilson_interval(out.failures, trials);
    out.wilson_low = w.low;
    out.wilson_high = w.high;
    out.alpha = alpha;
    out.beta = beta;
    return out;
}

double conversion_crosscheck(double rho_max, double epsilon) {
    RhoCurve rc;
    rc.rho = {rho_max};
    DeltaCurve dc = zcdp_to_approx_dp(rc, epsilon);
    double ours = dc.delta[0];

    // Brute-force minimum over a log-spaced grid of gamma - 1, matching the
    // search range of the golden-section minimizer.
    const int points = 100000;
    const double wlo = std::log(1e-12), whi = std::log(1e6);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        double w = wlo + (whi - wlo) * static_cast<double>(i) /
                             static_cast<double>(points - 1);
        double lp = log_psi(1.0 + std::exp(w), rho_max, epsilon);
        double d = lp >= 0.0 ? 1.0 : std::exp(lp);
        best = std::min(best, d);
    }
    // Signed: a negative gap means the continuous minimizer landed below the
    // grid's best cell, which is the grid's discretization error, not ours.
    return (ours - best) / std::max(best, 1e-300);
}

double slope_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3)
        throw std::invalid_argument("slope_fit: need at least 3 points");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::domain_error("slope_fit: coordinates must be positive");
        mx += std::log(x);
        my += std::log(y);
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        double dx = std::log(x) - mx;
        sxy += dx * (std::log(y) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0))
        throw std::domain_error("slope_fit: x values must not be all equal");
    return sxy / sxx;
}

}  // namespace adagrow
