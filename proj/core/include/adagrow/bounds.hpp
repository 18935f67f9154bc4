#pragma once

// Worst-case distributional accuracy guarantees for adaptively chosen
// statistical queries on a growing dataset, plus the baselines they are
// compared against:
//   ours-n / ours-u  noise-calibrated bound with non-uniform / uniform
//                    per-round privacy accounting,
//   jlnrss           static-dataset bound composed over query batches,
//   jlnrss-plus      same composition with unconstrained free parameters
//                    and the tighter privacy conversion,
//   split            sample splitting with a Hoeffding union bound,
//   low-sens / min-query  transfer bounds for low-sensitivity and
//                    minimization queries,
//   adaptive         bound under a privacy filter with a fixed budget.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adagrow/optimize.hpp"
#include "adagrow/privacy.hpp"
#include "adagrow/schedule.hpp"

namespace adagrow {

enum class Method {
    OursN,
    OursU,
    JLNRSS,
    JLNRSSPlus,
    Split,
    LowSens,
    MinQuery,
    Adaptive,
};

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct AccuracySpec {
    double alpha_target = 0.0;  // in (0, 1]
    double beta_prime = 0.0;    // coverage failure budget, in (0, 1)
};

// Per-round sensitivity caps Delta_t for t = n0 .. n0 + cap.size() - 1,
// all positive.  Statistical queries satisfy Delta_t <= 1/t.
struct SensitivityCurve {
    count_t n0 = 1;
    std::vector<double> cap;
};

SensitivityCurve stat_query_sensitivity(GrowthSchedule sched);

struct OptTrace {
    long evals = 0;
    int restarts_used = 0;
};

struct BoundResult {
    double alpha_prime = 0.0;
    double beta_prime = 0.0;
    Method method = Method::OursN;
    std::map<std::string, double> opt_params;
    std::vector<double> alpha_prime_t;  // per-round guarantees when produced
    bool vacuous = false;               // alpha_prime > 1
    OptTrace trace;
};

// Free parameters of the noise-calibrated bounds.
struct FreeParams {
    double sigma = 0.0;
    double beta = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;  // only the constrained static baseline optimizes this
    double c = 1.0;
    double d = 1.0;
};

enum class DeltaMode { nonuniform, uniform };

struct OptConfig {
    int restarts = 32;
    Tolerance tol = {1e-12, 500};
    std::uint64_t seed = 0x5eed5eedULL;
};

// The distributional accuracy objective for noise scale sigma, per-query
// snapshot failure budget beta and DP epsilon:
//   lambda = sqrt(2) sigma erfc_inv(beta/k) + e^eps - 1 + beta/beta'
//            + 2 S / (n0 beta') + (2/beta') sqrt(2 beta S / n0),
// where S = sum_t delta(t) for the delta curve induced by the allocation
// (uniform mode replaces every entry by the worst round, S = n max delta).
// The QueryAllocation overload evaluates through the dense privacy curves;
// the BatchPlan overload computes the same value from the plan's constant
// segments and is the fast path used inside optimization loops.
double lambda_objective(const FreeParams& p, const QueryAllocation& alloc,
                        double beta_prime, DeltaMode mode);
double lambda_objective(const FreeParams& p, const BatchPlan& plan,
                        double beta_prime, DeltaMode mode);

// alpha' = min over (sigma, beta, eps) of lambda_objective.
BoundResult ours_bound(const BatchPlan& plan, double beta_prime, DeltaMode mode,
                       const OptConfig& cfg = {});
BoundResult ours_bound(const QueryAllocation& alloc, double beta_prime,
                       DeltaMode mode, const OptConfig& cfg = {});

// Static-dataset baseline for k queries on n points at failure budget beta:
//   min over (sigma, delta) of
//     sqrt(2) sigma erfc_inv(delta/k)
//     + exp(k/(2 n^2 sigma^2)
//           + sqrt((2k/(n^2 sigma^2)) log(sqrt(pi k)/(sqrt(2) n sigma delta))))
//     - 1 + 6 delta / beta.
double jung_static_objective(count_t n, count_t k, double beta, double sigma,
                             double delta);
double jung_static_alpha(count_t n, count_t k, double beta,
                         const OptConfig& cfg = {}, FreeParams* opt = nullptr);

// Tightened static baseline: free (sigma, beta, eps) and the conversion
// delta = psi(gamma*, k/(2 sigma^2 n^2), eps):
//   min of sqrt(2) sigma erfc_inv(beta/k) + e^eps - 1 + 2 delta/beta'
//          + beta/beta' + (2/beta') sqrt(2 beta delta).
double jung_plus_static_objective(count_t n, count_t k, double beta_prime,
                                  double sigma, double beta, double eps);
double jung_plus_static_alpha(count_t n, count_t k, double beta_prime,
                              const OptConfig& cfg = {},
                              FreeParams* opt = nullptr);

// Compose a static bound over batches: each batch of batch_k[j] queries runs
// against a fresh dataset of batch_sizes[j] points at budget beta'/b, and the
// guarantee is the worst batch.  variant selects JLNRSS or JLNRSSPlus.
double batched_static_bound(std::span<const count_t> batch_sizes,
                            std::span<const count_t> batch_k,
                            double beta_prime, Method variant,
                            const OptConfig& cfg = {});

// Dataset sizes seen by each batch of a plan: the first batch uses all points
// present at its round, every later batch the fresh arrivals since the
// previous one, so the sizes partition the final dataset.
std::vector<count_t> batch_dataset_sizes(const BatchPlan& plan);

// Sample splitting: k queries each on a fresh chunk of n/k points.
double split_alpha(count_t n, count_t k, double beta);
// Points needed for accuracy alpha: ceil((k / (2 alpha^2)) log(2k/beta)).
count_t split_alpha_to_n(count_t k, double alpha, double beta);
// Largest k whose requirement fits in n (0 when even k = 1 does not fit).
count_t split_max_k(count_t n, double alpha, double beta);

// Posterior-stability transfer: (alpha_t, beta) snapshot accuracy plus
// (eps_ps, delta_ps) posterior stability gives distributional accuracy
// (alpha_t + c + eps_ps, beta/c + delta_ps) for any c > 0.
std::pair<double, double> ps_transfer(double alpha_t, double beta,
                                      double eps_ps, double delta_ps, double c);

// Posterior stability of a DP interaction, statistical queries:
//   eps' = e^eps - 1 + 2 c sum_t delta(t) / n0,  delta' = 1/c.
std::pair<double, double> stat_ps_from_dp(const DeltaCurve& dc, count_t n0,
                                          double c);

// Posterior stability for low-sensitivity queries with caps Delta_t:
//   eps' = e^eps max_t(t Delta_t) - min_t(t Delta_t)
//          + 4 c (sum_t delta(t)) max_t Delta_t,  delta' = 1/c,
// extrema over t in [n0, n].
std::pair<double, double> lowsens_ps_from_dp(const DeltaCurve& dc,
                                             const SensitivityCurve& sens,
                                             double c);

// End-to-end transfers; alpha_t holds the per-round snapshot accuracies for
// t = n0..n and the result carries the matching per-round alpha'_t.
BoundResult lowsens_transfer(std::span<const double> alpha_t, double beta,
                             const DeltaCurve& dc, const SensitivityCurve& sens,
                             double c, double d);
// Minimization queries double the stability terms.
BoundResult minq_transfer(std::span<const double> alpha_t, double beta,
                          const DeltaCurve& dc, const SensitivityCurve& sens,
                          double c, double d);

// Accuracy of a filtered interaction that answered all plan queries without
// terminating.  The filter guarantees budget rho_target regardless of the
// realized charges, so delta = psi(gamma*, rho_target, eps) uniformly, and
// the noise scale is pinned by the charge identity
//   rho_target = sum_j sizes[j] / (2 sigma^2 rounds[j]^2).
BoundResult adaptive_filter_bound(const BatchPlan& plan, double rho_target,
                                  double beta_prime, const OptConfig& cfg = {});

// Largest k for which the method's alpha'(k) stays within spec.alpha_target,
// with k spread over min(b, k) batches.  Returns 0 when k = 1 already fails.
count_t max_queries(Method method, GrowthSchedule sched, count_t b,
                    const AccuracySpec& spec, const OptConfig& cfg = {});

}  // namespace adagrow
