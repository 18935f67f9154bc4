#include "adagrow/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adagrow/rng.hpp"

namespace adagrow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BoxTransform {
    // Nelder-Mead runs in z space; dimensions flagged log_scaled use z = log x.
    std::vector<double> zlo, zhi;
    std::vector<bool> log_scaled;

    explicit BoxTransform(const Box& box) {
        std::size_t d = box.dim();
        if (d == 0 || box.hi.size() != d)
            throw std::invalid_argument("minimize_box: empty or ragged box");
        log_scaled.assign(d, false);
        if (!box.log_scaled.empty()) {
            if (box.log_scaled.size() != d)
                throw std::invalid_argument("minimize_box: log flag size mismatch");
            log_scaled = box.log_scaled;
        }
        zlo.resize(d);
        zhi.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            if (!(box.lo[i] < box.hi[i]))
                throw std::invalid_argument("minimize_box: lo must be < hi");
            if (log_scaled[i] && box.lo[i] <= 0.0)
                throw std::invalid_argument("minimize_box: log dimension needs lo > 0");
            zlo[i] = log_scaled[i] ? std::log(box.lo[i]) : box.lo[i];
            zhi[i] = log_scaled[i] ? std::log(box.hi[i]) : box.hi[i];
        }
    }

    void to_x(std::span<const double> z, std::vector<double>& x) const {
        x.resize(z.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            x[i] = log_scaled[i] ? std::exp(z[i]) : z[i];
    }

    void clamp(std::vector<double>& z) const {
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] = std::clamp(z[i], zlo[i], zhi[i]);
    }
};

struct Evaluator {
    const std::function<double(std::span<const double>)>& f;
    const BoxTransform& tf;
    mutable std::vector<double> xbuf;
    mutable long evals = 0;

    double operator()(std::vector<double>& z) const {
        tf.clamp(z);
        tf.to_x(z, xbuf);
        ++evals;
        double v = f(xbuf);
        return std::isnan(v) ? kInf : v;
    }
};

// One Nelder-Mead descent from z0; returns best (value, point) found.
std::pair<double, std::vector<double>> nelder_mead(const Evaluator& eval,
                                                   std::vector<double> z0,
                                                   const BoxTransform& tf,
                                                   Tolerance tol) {
    const std::size_t d = z0.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, shrink = 0.5;

    std::vector<std::vector<double>> pts(d + 1, z0);
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        double span = tf.zhi[i] - tf.zlo[i];
        double step = 0.05 * span;
        pts[i + 1][i] += (pts[i + 1][i] + step <= tf.zhi[i]) ? step : -step;
    }
    for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(pts[i]);

    std::vector<std::size_t> order(d + 1);
    std::vector<double> centroid(d), trial(d), trial2(d);
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        for (std::size_t i = 0; i <= d; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        double fbest = fv[order[0]], fworst = fv[order[d]];
        if (std::isfinite(fworst) &&
            fworst - fbest <= tol.rel_err * (std::abs(fbest) + 1e-300))
            break;

        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += pts[order[j]][i];
            centroid[i] = s / static_cast<double>(d);
        }
        const auto& worst = pts[order[d]];
        for (std::size_t i = 0; i < d; ++i)
            trial[i] = centroid[i] + alpha * (centroid[i] - worst[i]);
        double fr = eval(trial);

        if (fr < fv[order[0]]) {
            for (std::size_t i = 0; i < d; ++i)
                trial2[i] = centroid[i] + gamma * (trial[i] - centroid[i]);
            double fe = eval(trial2);
            if (fe < fr) {
                pts[order[d]] = trial2;
                fv[order[d]] = fe;
            } else {
                pts[order[d]] = trial;
                fv[order[d]] = fr;
            }
        } else if (fr < fv[order[d - 1]]) {
            pts[order[d]] = trial;
            fv[order[d]] = fr;
        } else {
            bool outside = fr < fv[order[d]];
            const auto& base = outside ? trial : pts[order[d]];
            for (std::size_t i = 0; i < d; ++i)
                trial2[i] = centroid[i] + rho * (base[i] - centroid[i]);
            double fc = eval(trial2);
            if (fc < std::min(fr, fv[order[d]])) {
                pts[order[d]] = trial2;
                fv[order[d]] = fc;
            } else {
                for (std::size_t j = 1; j <= d; ++j) {
                    auto& p = pts[order[j]];
                    for (std::size_t i = 0; i < d; ++i)
                        p[i] = pts[order[0]][i] + shrink * (p[i] - pts[order[0]][i]);
                    fv[order[j]] = eval(p);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (fv[i] < fv[best]) best = i;
    return {fv[best], pts[best]};
}

}  // namespace

OptResult minimize_box(const std::function<double(std::span<const double>)>& f,
                       const Box& box, int restarts, Tolerance tol,
                       std::uint64_t seed) {
    if (restarts < 1) throw std::invalid_argument("minimize_box: restarts >= 1");
    BoxTransform tf(box);
    const std::size_t d = box.dim();
    Evaluator eval{f, tf, {}, 0};

    // Latin hypercube start points: each dimension visits every stratum once.
    Rng rng = Rng::stream(seed, 0);
    std::vector<std::vector<double>> starts(restarts, std::vector<double>(d));
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<int> strata(restarts);
        for (int r = 0; r < restarts; ++r) strata[r] = r;
        for (int r = restarts - 1; r > 0; --r)
            std::swap(strata[r], strata[rng.below(static_cast<std::uint64_t>(r + 1))]);
        for (int r = 0; r < restarts; ++r) {
            double u = (strata[r] + rng.uniform01()) / restarts;
            starts[r][i] = tf.zlo[i] + u * (tf.zhi[i] - tf.zlo[i]);
        }
    }

    bool any_finite = false;
    double best_val = kInf;
    std::vector<double> best_z;
    int used = 0;
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> z = starts[r];
        double f0 = eval(z);
        if (!std::isfinite(f0)) continue;
        any_finite = true;
        ++used;
        auto [val, zmin] = nelder_mead(eval, z, tf, tol);
        if (val < best_val ||
            (val == best_val && std::lexicographical_compare(
                                    zmin.begin(), zmin.end(), best_z.begin(), best_z.end()))) {
            best_val = val;
            best_z = zmin;
        }
    }
    if (!any_finite)
        throw std::runtime_error(
            "minimize_box: objective non-finite at every sampled start");

    OptResult out;
    tf.clamp(best_z);
    tf.to_x(best_z, out.argmin);
    out.value = best_val;
    out.evals = eval.evals;
    out.restarts_used = used;
    return out;
}

ScalarMin unimodal_min(const std::function<double(double)>& f, double lo,
                       double hi, double rel_tol) {
    if (!(lo < hi)) throw std::invalid_argument("unimodal_min: lo must be < hi");
    const double phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > rel_tol * (std::abs(a) + std::abs(b) + 1.0)) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    ScalarMin m;
    m.x = (f1 <= f2) ? x1 : x2;
    m.fx = std::min(f1, f2);
    double flo = f(lo), fhi = f(hi);
    if (flo <= m.fx) {
        m.x = lo;
        m.fx = flo;
        m.at_lower = true;
    }
    if (fhi < m.fx) {
        m.x = hi;
        m.fx = fhi;
        m.at_lower = false;
        m.at_upper = true;
    }
    return m;
}

std::int64_t monotone_bisect(const std::function<bool(std::int64_t)>& pred,
                             std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("monotone_bisect: lo > hi");
    if (!pred(lo)) return lo - 1;
    if (pred(hi)) return hi;
    // Invariant: pred(lo) true, pred(hi) false.
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace adagrow
