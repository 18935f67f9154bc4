#include "adagrow/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adagrow/optimize.hpp"

namespace adagrow {

namespace {

constexpr double kGammaMax = 1e6;
constexpr double kGammaEdge = 1e-12;  // search over gamma - 1 in [edge, max]
constexpr double kLogDblMax = 709.782712893384;

}  // namespace

double RhoCurve::max() const {
    double m = 0.0;
    for (double r : rho) m = std::max(m, r);
    return m;
}

RhoCurve gauss_rho_curve(const QueryAllocation& alloc,
                         std::span<const double> sigma) {
    auto report = validate_allocation(alloc);
    if (!report.ok)
        throw std::invalid_argument("gauss_rho_curve: invalid allocation: " +
                                    report.violation);
    const std::size_t n = alloc.per_round.size();
    if (sigma.size() != n)
        throw std::invalid_argument("gauss_rho_curve: sigma length mismatch");

    // Suffix sums of the per-round charges k_tau / (2 sigma_tau^2 tau^2).
    RhoCurve curve;
    curve.rho.assign(n, 0.0);
    double suffix = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        count_t k = alloc.per_round[i];
        if (k > 0) {
            double s = sigma[i];
            if (!(s > 0.0))
                throw std::invalid_argument(
                    "gauss_rho_curve: sigma must be positive on active rounds");
            double t = static_cast<double>(i + 1);
            suffix += static_cast<double>(k) / (2.0 * s * s * t * t);
        }
        curve.rho[i] = suffix;
    }
    return curve;
}

RhoCurve gauss_rho_curve(const QueryAllocation& alloc, double sigma) {
    std::vector<double> s(alloc.per_round.size(), sigma);
    return gauss_rho_curve(alloc, s);
}

RhoCurve compose_rho(const RhoCurve& a, const RhoCurve& b) {
    if (a.rho.size() != b.rho.size())
        throw std::invalid_argument("compose_rho: curve length mismatch");
    RhoCurve out;
    out.rho.resize(a.rho.size());
    for (std::size_t i = 0; i < a.rho.size(); ++i)
        out.rho[i] = a.rho[i] + b.rho[i];
    return out;
}

double log_psi(double gamma, double rho, double eps) {
    if (!(gamma > 1.0))
        throw std::domain_error("psi: gamma must exceed 1");
    if (!(rho >= 0.0) || !(eps >= 0.0))
        throw std::domain_error("psi: rho and eps must be nonnegative");
    // With u = gamma - 1:
    //   log psi = u((1+u)rho - eps) + u log u - (1+u) log1p(u),
    // which is stable both as u -> 0 (u log u -> 0) and for large u.
    double u = gamma - 1.0;
    return u * ((1.0 + u) * rho - eps) + u * std::log(u) -
           (1.0 + u) * std::log1p(u);
}

double psi(double gamma, double rho, double eps) {
    double lp = log_psi(gamma, rho, eps);
    if (lp > kLogDblMax) return std::numeric_limits<double>::infinity();
    return std::exp(lp);
}

GammaStar gamma_star(double rho_max, double eps) {
    if (!(rho_max >= 0.0) || !(eps >= 0.0))
        throw std::domain_error("gamma_star: rho and eps must be nonnegative");
    // log psi is convex in gamma, hence unimodal in log(gamma - 1) as well.
    auto g = [&](double w) { return log_psi(1.0 + std::exp(w), rho_max, eps); };
    ScalarMin m = unimodal_min(g, std::log(kGammaEdge), std::log(kGammaMax), 1e-14);
    GammaStar out;
    out.gamma = 1.0 + std::exp(m.x);
    out.log_psi = m.fx;
    out.at_boundary = m.at_lower || m.at_upper;
    return out;
}

namespace {

DeltaCurve delta_from_rho(const RhoCurve& rho, double eps, bool uniform) {
    DeltaCurve out;
    out.epsilon = eps;
    out.delta.resize(rho.rho.size());
    const double rho_max = rho.max();
    GammaStar gs = gamma_star(rho_max, eps);
    double sum = 0.0;
    for (std::size_t i = 0; i < rho.rho.size(); ++i) {
        double r = uniform ? rho_max : rho.rho[i];
        double lp = log_psi(gs.gamma, r, eps);
        double d = (lp >= 0.0) ? 1.0 : std::exp(lp);
        if (lp >= 0.0) out.clamped = true;
        out.delta[i] = d;
        sum += d;
    }
    out.sum = sum;
    return out;
}

}  // namespace

DeltaCurve zcdp_to_approx_dp(const RhoCurve& rho, double eps) {
    return delta_from_rho(rho, eps, /*uniform=*/false);
}

DeltaCurve zcdp_to_approx_dp_uniform(const RhoCurve& rho, double eps) {
    return delta_from_rho(rho, eps, /*uniform=*/true);
}

FilterDecision filter_charge(FilterState& state, double sigma, count_t t) {
    if (state.terminated)
        throw std::logic_error("filter_charge: filter already terminated");
    if (!(sigma > 0.0)) throw std::invalid_argument("filter_charge: sigma > 0");
    if (t < 1) throw std::invalid_argument("filter_charge: t >= 1");
    double td = static_cast<double>(t);
    double charge = 1.0 / (2.0 * sigma * sigma * td * td);
    // Refused charges are not spent, so spent_rho never exceeds the target.
    if (state.spent_rho + charge > state.target_rho) {
        state.terminated = true;
        return FilterDecision::terminate;
    }
    state.spent_rho += charge;
    return FilterDecision::approve;
}

}  // namespace adagrow
