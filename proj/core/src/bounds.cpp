#include "adagrow/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "adagrow/specfun.hpp"

namespace adagrow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kPi = 3.14159265358979323846;
constexpr double kLogDblMax = 709.782712893384;

// Search regions for the free parameters.  The optima sit well inside these
// ranges in every regime of interest; the edges only bind where the bound is
// already vacuous.
constexpr double kSigmaLo = 1e-6, kSigmaHi = 1e2;
constexpr double kBetaLo = 1e-14, kBetaHi = 1.0 - 1e-9;
constexpr double kEpsLo = 0.0, kEpsHi = 6.0;
constexpr double kDeltaLo = 1e-16;

// Doubling search gives up here; a budget this large is never binding.
constexpr count_t kMaxQueriesCap = count_t(1) << 40;

void check_beta_prime(double beta_prime) {
    if (!(beta_prime > 0.0 && beta_prime < 1.0))
        throw std::invalid_argument("beta_prime must lie in (0, 1)");
}

void check_free_params(const FreeParams& p) {
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw std::invalid_argument("sigma must be positive and finite");
    if (!(p.beta > 0.0 && p.beta < 1.0))
        throw std::invalid_argument("beta must lie in (0, 1)");
    if (!(p.epsilon >= 0.0) || !std::isfinite(p.epsilon))
        throw std::invalid_argument("epsilon must be nonnegative and finite");
}

// Constant segments of the weight curve w(t) = sigma^2 rho(t), which depends
// only on the plan: w(t) = sum_{j : rounds[j] >= t} sizes[j] / (2 rounds[j]^2)
// has breakpoints at the plan rounds only, so the delta sum costs O(b) per
// (sigma, eps) instead of O(n).
struct Segments {
    std::vector<double> weight;  // non-increasing; weight[0] scales rho_max
    std::vector<count_t> len;    // segment lengths partition [1, n]
    count_t n = 1;
    count_t n0 = 1;
    count_t k = 0;
};

Segments make_segments(const BatchPlan& plan) {
    const auto& sched = plan.schedule;
    if (sched.n0 < 1 || sched.n < sched.n0)
        throw std::invalid_argument("bounds: invalid growth schedule");
    if (plan.rounds.size() != plan.sizes.size())
        throw std::invalid_argument("bounds: malformed batch plan");
    const std::size_t b = plan.rounds.size();
    count_t total = 0;
    for (std::size_t j = 0; j < b; ++j) {
        if (plan.sizes[j] < 1 || plan.rounds[j] < sched.n0 ||
            plan.rounds[j] > sched.n ||
            (j > 0 && plan.rounds[j] <= plan.rounds[j - 1]))
            throw std::invalid_argument("bounds: malformed batch plan");
        total += plan.sizes[j];
    }
    if (total != plan.total)
        throw std::invalid_argument("bounds: batch plan total mismatch");

    Segments seg;
    seg.n = sched.n;
    seg.n0 = sched.n0;
    seg.k = plan.total;
    std::vector<double> suffix(b + 1, 0.0);
    for (std::size_t j = b; j-- > 0;) {
        double r = static_cast<double>(plan.rounds[j]);
        suffix[j] = suffix[j + 1] + static_cast<double>(plan.sizes[j]) / (2.0 * r * r);
    }
    count_t prev = 0;
    for (std::size_t j = 0; j < b; ++j) {
        seg.weight.push_back(suffix[j]);
        seg.len.push_back(plan.rounds[j] - prev);
        prev = plan.rounds[j];
    }
    if (prev < seg.n) {  // query-free tail still carries delta > 0
        seg.weight.push_back(0.0);
        seg.len.push_back(seg.n - prev);
    }
    return seg;
}

// sum_t delta(t) for uniform noise scale sigma, evaluated per segment.  The
// clamp mirrors the dense conversion: entries with log psi >= 0 become 1.
double segment_delta_sum(const Segments& seg, double sigma, double eps,
                         DeltaMode mode) {
    const double inv2 = 1.0 / (sigma * sigma);
    const double rho_max = seg.weight.empty() ? 0.0 : seg.weight.front() * inv2;
    GammaStar gs = gamma_star(rho_max, eps);
    if (mode == DeltaMode::uniform) {
        double d = gs.log_psi >= 0.0 ? 1.0 : std::exp(gs.log_psi);
        return static_cast<double>(seg.n) * d;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < seg.weight.size(); ++j) {
        double lp = log_psi(gs.gamma, seg.weight[j] * inv2, eps);
        double d = lp >= 0.0 ? 1.0 : std::exp(lp);
        sum += static_cast<double>(seg.len[j]) * d;
    }
    return sum;
}

// Final assembly of the distributional accuracy objective from the delta sum.
double lambda_terms(double sigma, double beta, double eps, count_t k,
                    count_t n0, double dsum, double beta_prime) {
    double first =
        k > 0 ? kSqrt2 * sigma * erfc_inv(beta / static_cast<double>(k)) : 0.0;
    double s = dsum / static_cast<double>(n0);
    return first + std::expm1(eps) + beta / beta_prime + 2.0 * s / beta_prime +
           (2.0 / beta_prime) * std::sqrt(2.0 * beta * s);
}

Box noise_box() {
    Box box;
    box.lo = {kSigmaLo, kBetaLo, kEpsLo};
    box.hi = {kSigmaHi, kBetaHi, kEpsHi};
    box.log_scaled = {true, true, false};
    return box;
}

BoundResult pack_result(const OptResult& r, Method method, double beta_prime,
                        std::map<std::string, double> params) {
    BoundResult out;
    out.alpha_prime = r.value;
    out.beta_prime = beta_prime;
    out.method = method;
    out.opt_params = std::move(params);
    out.vacuous = !(r.value <= 1.0);
    out.trace = {r.evals, r.restarts_used};
    return out;
}

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::OursN: return "ours-n";
        case Method::OursU: return "ours-u";
        case Method::JLNRSS: return "jlnrss";
        case Method::JLNRSSPlus: return "jlnrss-plus";
        case Method::Split: return "split";
        case Method::LowSens: return "low-sens";
        case Method::MinQuery: return "min-query";
        case Method::Adaptive: return "adaptive";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "ours-n") return Method::OursN;
    if (name == "ours-u") return Method::OursU;
    if (name == "jlnrss") return Method::JLNRSS;
    if (name == "jlnrss-plus" || name == "jlnrss+") return Method::JLNRSSPlus;
    if (name == "split") return Method::Split;
    if (name == "low-sens") return Method::LowSens;
    if (name == "min-query") return Method::MinQuery;
    if (name == "adaptive") return Method::Adaptive;
    return std::nullopt;
}

SensitivityCurve stat_query_sensitivity(GrowthSchedule sched) {
    if (sched.n0 < 1 || sched.n < sched.n0)
        throw std::invalid_argument("stat_query_sensitivity: invalid schedule");
    SensitivityCurve s;
    s.n0 = sched.n0;
    s.cap.reserve(static_cast<std::size_t>(sched.n - sched.n0 + 1));
    for (count_t t = sched.n0; t <= sched.n; ++t)
        s.cap.push_back(1.0 / static_cast<double>(t));
    return s;
}

double lambda_objective(const FreeParams& p, const QueryAllocation& alloc,
                        double beta_prime, DeltaMode mode) {
    check_beta_prime(beta_prime);
    check_free_params(p);
    RhoCurve rho = gauss_rho_curve(alloc, p.sigma);
    DeltaCurve dc = mode == DeltaMode::uniform
                        ? zcdp_to_approx_dp_uniform(rho, p.epsilon)
                        : zcdp_to_approx_dp(rho, p.epsilon);
    return lambda_terms(p.sigma, p.beta, p.epsilon, alloc.total,
                        alloc.schedule.n0, dc.sum, beta_prime);
}

double lambda_objective(const FreeParams& p, const BatchPlan& plan,
                        double beta_prime, DeltaMode mode) {
    check_beta_prime(beta_prime);
    check_free_params(p);
    Segments seg = make_segments(plan);
    return lambda_terms(p.sigma, p.beta, p.epsilon, seg.k, seg.n0,
                        segment_delta_sum(seg, p.sigma, p.epsilon, mode),
                        beta_prime);
}

BoundResult ours_bound(const BatchPlan& plan, double beta_prime, DeltaMode mode,
                       const OptConfig& cfg) {
    check_beta_prime(beta_prime);
    Segments seg = make_segments(plan);
    auto f = [&](std::span<const double> v) {
        return lambda_terms(v[0], v[1], v[2], seg.k, seg.n0,
                            segment_delta_sum(seg, v[0], v[2], mode),
                            beta_prime);
    };
    OptResult r = minimize_box(f, noise_box(), cfg.restarts, cfg.tol, cfg.seed);
    return pack_result(r,
                       mode == DeltaMode::uniform ? Method::OursU : Method::OursN,
                       beta_prime,
                       {{"sigma", r.argmin[0]},
                        {"beta", r.argmin[1]},
                        {"epsilon", r.argmin[2]}});
}

BoundResult ours_bound(const QueryAllocation& alloc, double beta_prime,
                       DeltaMode mode, const OptConfig& cfg) {
    return ours_bound(plan_from_allocation(alloc), beta_prime, mode, cfg);
}

double jung_static_objective(count_t n, count_t k, double beta, double sigma,
                             double delta) {
    if (n < 1 || k < 1)
        throw std::invalid_argument("jung_static_objective: n, k must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("jung_static_objective: beta in (0, 1)");
    if (!(sigma > 0.0) || !(delta > 0.0))
        throw std::invalid_argument(
            "jung_static_objective: sigma, delta must be positive");
    if (delta >= 2.0 * static_cast<double>(k)) return kInf;
    double first = kSqrt2 * sigma * erfc_inv(delta / static_cast<double>(k));
    // log(sqrt(pi k) / (sqrt(2) n sigma delta)); the bound needs it >= 0
    double la = 0.5 * std::log(kPi * static_cast<double>(k)) -
                std::log(kSqrt2 * static_cast<double>(n) * sigma * delta);
    if (la < 0.0) return kInf;
    double q = static_cast<double>(k) /
               (static_cast<double>(n) * static_cast<double>(n) * sigma * sigma);
    double e = 0.5 * q + std::sqrt(2.0 * q * la);
    if (e > kLogDblMax) return kInf;
    return first + std::expm1(e) + 6.0 * delta / beta;
}

double jung_static_alpha(count_t n, count_t k, double beta,
                         const OptConfig& cfg, FreeParams* opt) {
    if (n < 1 || k < 1)
        throw std::invalid_argument("jung_static_alpha: n, k must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("jung_static_alpha: beta in (0, 1)");
    Box box;
    box.lo = {kSigmaLo, kDeltaLo};
    box.hi = {kSigmaHi, kBetaHi};
    box.log_scaled = {true, true};
    auto f = [&](std::span<const double> v) {
        return jung_static_objective(n, k, beta, v[0], v[1]);
    };
    OptResult r = minimize_box(f, box, cfg.restarts, cfg.tol, cfg.seed);
    if (opt) {
        *opt = FreeParams{};
        opt->sigma = r.argmin[0];
        opt->delta = r.argmin[1];
        opt->beta = beta;
    }
    return r.value;
}

double jung_plus_static_objective(count_t n, count_t k, double beta_prime,
                                  double sigma, double beta, double eps) {
    if (n < 1 || k < 1)
        throw std::invalid_argument(
            "jung_plus_static_objective: n, k must be >= 1");
    check_beta_prime(beta_prime);
    check_free_params({sigma, beta, eps});
    double rho = static_cast<double>(k) /
                 (2.0 * sigma * sigma * static_cast<double>(n) *
                  static_cast<double>(n));
    GammaStar gs = gamma_star(rho, eps);
    double delta = gs.log_psi >= 0.0 ? 1.0 : std::exp(gs.log_psi);
    double first = kSqrt2 * sigma * erfc_inv(beta / static_cast<double>(k));
    return first + std::expm1(eps) + beta / beta_prime +
           2.0 * delta / beta_prime +
           (2.0 / beta_prime) * std::sqrt(2.0 * beta * delta);
}

double jung_plus_static_alpha(count_t n, count_t k, double beta_prime,
                              const OptConfig& cfg, FreeParams* opt) {
    if (n < 1 || k < 1)
        throw std::invalid_argument("jung_plus_static_alpha: n, k must be >= 1");
    check_beta_prime(beta_prime);
    auto f = [&](std::span<const double> v) {
        return jung_plus_static_objective(n, k, beta_prime, v[0], v[1], v[2]);
    };
    OptResult r = minimize_box(f, noise_box(), cfg.restarts, cfg.tol, cfg.seed);
    if (opt) {
        *opt = FreeParams{};
        opt->sigma = r.argmin[0];
        opt->beta = r.argmin[1];
        opt->epsilon = r.argmin[2];
    }
    return r.value;
}

double batched_static_bound(std::span<const count_t> batch_sizes,
                            std::span<const count_t> batch_k,
                            double beta_prime, Method variant,
                            const OptConfig& cfg) {
    if (batch_sizes.size() != batch_k.size() || batch_sizes.empty())
        throw std::invalid_argument(
            "batched_static_bound: need matching nonempty size/count lists");
    if (variant != Method::JLNRSS && variant != Method::JLNRSSPlus)
        throw std::invalid_argument(
            "batched_static_bound: variant must be jlnrss or jlnrss-plus");
    check_beta_prime(beta_prime);
    const double beta_b = beta_prime / static_cast<double>(batch_sizes.size());
    std::map<std::pair<count_t, count_t>, double> memo;
    double worst = 0.0;
    for (std::size_t i = 0; i < batch_sizes.size(); ++i) {
        auto key = std::make_pair(batch_sizes[i], batch_k[i]);
        auto it = memo.find(key);
        if (it == memo.end()) {
            double a = variant == Method::JLNRSS
                           ? jung_static_alpha(key.first, key.second, beta_b, cfg)
                           : jung_plus_static_alpha(key.first, key.second,
                                                    beta_b, cfg);
            it = memo.emplace(key, a).first;
        }
        worst = std::max(worst, it->second);
    }
    return worst;
}

std::vector<count_t> batch_dataset_sizes(const BatchPlan& plan) {
    std::vector<count_t> out;
    out.reserve(plan.rounds.size());
    count_t prev = 0;
    for (count_t r : plan.rounds) {
        out.push_back(r - prev);
        prev = r;
    }
    return out;
}

double split_alpha(count_t n, count_t k, double beta) {
    if (n < 1 || k < 1)
        throw std::invalid_argument("split_alpha: n, k must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("split_alpha: beta in (0, 1)");
    if (k > n) return kInf;  // no fresh chunk left for some query
    return std::sqrt(static_cast<double>(k) *
                     std::log(2.0 * static_cast<double>(k) / beta) /
                     (2.0 * static_cast<double>(n)));
}

count_t split_alpha_to_n(count_t k, double alpha, double beta) {
    if (k < 1) throw std::invalid_argument("split_alpha_to_n: k must be >= 1");
    if (!(alpha > 0.0))
        throw std::invalid_argument("split_alpha_to_n: alpha must be positive");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("split_alpha_to_n: beta in (0, 1)");
    double need = std::ceil(static_cast<double>(k) /
                            (2.0 * alpha * alpha) *
                            std::log(2.0 * static_cast<double>(k) / beta));
    if (!(need < 9.0e18)) return std::numeric_limits<count_t>::max();
    return std::max<count_t>(k, static_cast<count_t>(need));
}

count_t split_max_k(count_t n, double alpha, double beta) {
    if (n < 1) throw std::invalid_argument("split_max_k: n must be >= 1");
    auto pred = [&](count_t k) { return split_alpha_to_n(k, alpha, beta) <= n; };
    if (!pred(1)) return 0;
    count_t hi = 1;
    while (hi < kMaxQueriesCap && pred(hi)) hi *= 2;
    if (pred(hi)) return hi;
    return monotone_bisect([&](std::int64_t k) { return pred(k); }, hi / 2, hi);
}

std::pair<double, double> ps_transfer(double alpha_t, double beta,
                                      double eps_ps, double delta_ps,
                                      double c) {
    if (!(c > 0.0)) throw std::invalid_argument("ps_transfer: c must be > 0");
    return {alpha_t + c + eps_ps, beta / c + delta_ps};
}

std::pair<double, double> stat_ps_from_dp(const DeltaCurve& dc, count_t n0,
                                          double c) {
    if (!(c > 0.0))
        throw std::invalid_argument("stat_ps_from_dp: c must be > 0");
    if (n0 < 1) throw std::invalid_argument("stat_ps_from_dp: n0 must be >= 1");
    return {std::expm1(dc.epsilon) +
                2.0 * c * dc.sum / static_cast<double>(n0),
            1.0 / c};
}

namespace {

struct SensExtremes {
    double t_cap_max;  // max over t of t * Delta_t
    double t_cap_min;  // min over t of t * Delta_t
    double cap_max;    // max over t of Delta_t
};

SensExtremes sens_extremes(const SensitivityCurve& sens) {
    if (sens.n0 < 1 || sens.cap.empty())
        throw std::invalid_argument("sensitivity curve must be nonempty");
    SensExtremes e{-kInf, kInf, 0.0};
    for (std::size_t i = 0; i < sens.cap.size(); ++i) {
        double cap = sens.cap[i];
        if (!(cap > 0.0))
            throw std::invalid_argument("sensitivity caps must be positive");
        double tc = static_cast<double>(sens.n0 + static_cast<count_t>(i)) * cap;
        e.t_cap_max = std::max(e.t_cap_max, tc);
        e.t_cap_min = std::min(e.t_cap_min, tc);
        e.cap_max = std::max(e.cap_max, cap);
    }
    return e;
}

BoundResult sensitivity_transfer(std::span<const double> alpha_t, double beta,
                                 const DeltaCurve& dc,
                                 const SensitivityCurve& sens, double c,
                                 double d, Method method) {
    if (!(c > 0.0) || !(d > 0.0))
        throw std::invalid_argument("transfer: c, d must be > 0");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("transfer: beta in (0, 1)");
    if (alpha_t.size() != sens.cap.size())
        throw std::invalid_argument(
            "transfer: alpha_t and sensitivity curve must cover the same rounds");
    SensExtremes e = sens_extremes(sens);
    double eps_ps = std::exp(dc.epsilon) * e.t_cap_max - e.t_cap_min +
                    4.0 * c * dc.sum * e.cap_max;
    if (method == Method::MinQuery) eps_ps *= 2.0;

    BoundResult out;
    out.method = method;
    out.beta_prime = beta / d + 1.0 / c;
    out.alpha_prime_t.reserve(alpha_t.size());
    double worst = -kInf;
    for (double a : alpha_t) {
        double ap = a + eps_ps + d;
        out.alpha_prime_t.push_back(ap);
        worst = std::max(worst, ap);
    }
    out.alpha_prime = worst;
    out.opt_params = {{"c", c}, {"d", d}, {"epsilon", dc.epsilon}};
    out.vacuous = !(worst <= 1.0);
    return out;
}

}  // namespace

std::pair<double, double> lowsens_ps_from_dp(const DeltaCurve& dc,
                                             const SensitivityCurve& sens,
                                             double c) {
    if (!(c > 0.0))
        throw std::invalid_argument("lowsens_ps_from_dp: c must be > 0");
    SensExtremes e = sens_extremes(sens);
    return {std::exp(dc.epsilon) * e.t_cap_max - e.t_cap_min +
                4.0 * c * dc.sum * e.cap_max,
            1.0 / c};
}

BoundResult lowsens_transfer(std::span<const double> alpha_t, double beta,
                             const DeltaCurve& dc, const SensitivityCurve& sens,
                             double c, double d) {
    return sensitivity_transfer(alpha_t, beta, dc, sens, c, d, Method::LowSens);
}

BoundResult minq_transfer(std::span<const double> alpha_t, double beta,
                          const DeltaCurve& dc, const SensitivityCurve& sens,
                          double c, double d) {
    return sensitivity_transfer(alpha_t, beta, dc, sens, c, d,
                                Method::MinQuery);
}

BoundResult adaptive_filter_bound(const BatchPlan& plan, double rho_target,
                                  double beta_prime, const OptConfig& cfg) {
    check_beta_prime(beta_prime);
    if (!(rho_target > 0.0) || !std::isfinite(rho_target))
        throw std::invalid_argument(
            "adaptive_filter_bound: rho_target must be positive");
    Segments seg = make_segments(plan);
    // The charges sum to weight[0] / sigma^2; spending the whole budget pins
    // the noise scale.
    double charge = seg.weight.empty() ? 0.0 : seg.weight.front();
    double sigma = seg.k > 0 ? std::sqrt(charge / rho_target) : 0.0;
    auto f = [&](std::span<const double> v) {
        GammaStar gs = gamma_star(rho_target, v[1]);
        double delta = gs.log_psi >= 0.0 ? 1.0 : std::exp(gs.log_psi);
        return lambda_terms(sigma, v[0], v[1], seg.k, seg.n0,
                            static_cast<double>(seg.n) * delta, beta_prime);
    };
    Box box;
    box.lo = {kBetaLo, kEpsLo};
    box.hi = {kBetaHi, kEpsHi};
    box.log_scaled = {true, false};
    OptResult r = minimize_box(f, box, cfg.restarts, cfg.tol, cfg.seed);
    return pack_result(r, Method::Adaptive, beta_prime,
                       {{"sigma", sigma},
                        {"beta", r.argmin[0]},
                        {"epsilon", r.argmin[1]},
                        {"rho_target", rho_target}});
}

count_t max_queries(Method method, GrowthSchedule sched, count_t b,
                    const AccuracySpec& spec, const OptConfig& cfg) {
    if (!(spec.alpha_target > 0.0))
        throw std::invalid_argument("max_queries: alpha_target must be > 0");
    check_beta_prime(spec.beta_prime);
    if (b < 1) throw std::invalid_argument("max_queries: b must be >= 1");

    std::function<double(count_t)> alpha_of_k;
    switch (method) {
        case Method::OursN:
        case Method::OursU: {
            DeltaMode mode = method == Method::OursU ? DeltaMode::uniform
                                                     : DeltaMode::nonuniform;
            alpha_of_k = [=](count_t k) {
                BatchPlan plan = make_batch_plan(k, std::min(b, k), sched);
                return ours_bound(plan, spec.beta_prime, mode, cfg).alpha_prime;
            };
            break;
        }
        case Method::JLNRSS:
        case Method::JLNRSSPlus:
            alpha_of_k = [=](count_t k) {
                BatchPlan plan = make_batch_plan(k, std::min(b, k), sched);
                auto sizes = batch_dataset_sizes(plan);
                return batched_static_bound(sizes, plan.sizes, spec.beta_prime,
                                            method, cfg);
            };
            break;
        case Method::Split:
            alpha_of_k = [=](count_t k) {
                return split_alpha_to_n(k, spec.alpha_target, spec.beta_prime) <=
                               sched.n
                           ? 0.0
                           : kInf;  // exact integer requirement check
            };
            break;
        default:
            throw std::invalid_argument(
                "max_queries: method has no query-count bound");
    }

    auto pred = [&](count_t k) { return alpha_of_k(k) <= spec.alpha_target; };
    if (!pred(1)) return 0;
    count_t hi = 1;
    while (hi < kMaxQueriesCap && pred(hi)) hi *= 2;
    if (pred(hi)) return hi;
    return monotone_bisect([&](std::int64_t k) { return pred(k); }, hi / 2, hi);
}

}  // namespace adagrow
