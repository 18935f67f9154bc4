#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "adagrow/parallel.hpp"

namespace adagrow::cli {

namespace {

double param(const BoundResult& r, const char* name) {
    return r.opt_params.at(name);
}

void cell(std::string& line, const std::string& value) {
    line += ',';
    line += value;
}

}  // namespace

AlphaEval eval_alpha(Method method, GrowthSchedule sched, count_t b, count_t k,
                     double beta_prime, std::optional<double> rho,
                     const OptConfig& cfg) {
    switch (method) {
        case Method::OursN:
        case Method::OursU: {
            DeltaMode mode = method == Method::OursU ? DeltaMode::uniform
                                                     : DeltaMode::nonuniform;
            BatchPlan plan = make_batch_plan(k, std::min(b, k), sched);
            BoundResult r = ours_bound(plan, beta_prime, mode, cfg);
            return {r.alpha_prime, param(r, "sigma"), param(r, "beta"),
                    param(r, "epsilon")};
        }
        case Method::JLNRSS:
        case Method::JLNRSSPlus: {
            BatchPlan plan = make_batch_plan(k, std::min(b, k), sched);
            auto sizes = batch_dataset_sizes(plan);
            double a = batched_static_bound(sizes, plan.sizes, beta_prime,
                                            method, cfg);
            return {a, std::nullopt, std::nullopt, std::nullopt};
        }
        case Method::Split:
            return {split_alpha(sched.n, k, beta_prime), std::nullopt,
                    std::nullopt, std::nullopt};
        case Method::Adaptive: {
            if (!rho)
                throw CliError(2,
                               "method 'adaptive' needs rho (the filter "
                               "budget); pass --rho or set it in the config");
            BatchPlan plan = make_batch_plan(k, std::min(b, k), sched);
            BoundResult r = adaptive_filter_bound(plan, *rho, beta_prime, cfg);
            return {r.alpha_prime, param(r, "sigma"), param(r, "beta"),
                    param(r, "epsilon")};
        }
        default:
            throw CliError(
                2, "method '" + std::string(method_name(method)) +
                       "' is a per-round transfer bound with no standalone "
                       "(n, b, k) form; it is reachable through the library");
    }
}

std::vector<Method> parse_method_list(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& name : names) {
        auto m = parse_method(name);
        if (!m)
            throw CliError(2, "unknown method '" + name +
                                  "' (known: ours-n, ours-u, jlnrss, "
                                  "jlnrss-plus, split, low-sens, min-query, "
                                  "adaptive)");
        out.push_back(*m);
    }
    return out;
}

Experiment Experiment::resolve(OptionSource& src) {
    Experiment ex;

    auto names = src.str_list("method");
    if (names.empty())
        names = {"ours-n", "ours-u", "jlnrss", "jlnrss-plus", "split"};
    ex.methods = parse_method_list(names);

    ex.alpha_target = src.f64("alpha", 0.1);
    if (!(ex.alpha_target > 0.0) || ex.alpha_target > 1.0)
        throw CliError(2, "alpha: must lie in (0, 1]");
    ex.beta_prime = src.f64("beta-prime", 0.05);
    if (!(ex.beta_prime > 0.0) || !(ex.beta_prime < 1.0))
        throw CliError(2, "beta-prime: must lie in (0, 1)");

    ex.n_grid = src.count_list("n");
    if (ex.n_grid.empty()) throw CliError(2, "n: required (one or more values)");
    for (count_t n : ex.n_grid)
        if (n < 1) throw CliError(2, "n: values must be >= 1");

    ex.b_grid = src.count_list("b");
    if (ex.b_grid.empty()) ex.b_grid = {1};
    for (count_t b : ex.b_grid)
        if (b < 1) throw CliError(2, "b: values must be >= 1");

    ex.k_grid = src.count_list("k");
    for (count_t k : ex.k_grid)
        if (k < 1) throw CliError(2, "k: values must be >= 1");

    // The dataset start is either a fixed n0 or n / growth-ratio; a tie at
    // the same precedence level is ambiguous and refused.
    int rank_n0 = src.rank("n0");
    int rank_ratio = src.rank("growth-ratio");
    if (rank_n0 > 0 && rank_n0 == rank_ratio)
        throw CliError(2, "give n0 or growth-ratio, not both");
    if (rank_n0 > rank_ratio) {
        ex.n0_fixed = src.count("n0", 1);
        if (*ex.n0_fixed < 1) throw CliError(2, "n0: must be >= 1");
    } else {
        ex.growth_ratio = src.f64("growth-ratio", 3.0);
        if (!(ex.growth_ratio >= 1.0))
            throw CliError(2, "growth-ratio: must be >= 1");
    }

    ex.rho = src.f64_opt("rho");
    if (ex.rho && !(*ex.rho > 0.0)) throw CliError(2, "rho: must be > 0");
    ex.seed = src.u64("seed", 1);
    ex.restarts = static_cast<int>(src.count("restarts", 32));
    if (ex.restarts < 1) throw CliError(2, "restarts: must be >= 1");
    ex.out = src.str("out", "");
    ex.svg = src.str("svg", "");

    ex.axis = src.str("axis", "");
    if (ex.axis.empty())
        ex.axis = ex.n_grid.size() > 1   ? "n"
                  : ex.b_grid.size() > 1 ? "b"
                  : ex.k_grid.size() > 1 ? "k"
                                         : "n";
    if (ex.axis != "n" && ex.axis != "b" && ex.axis != "k")
        throw CliError(2, "axis: must be n, b, or k");
    if (ex.axis == "k" && ex.k_grid.empty())
        throw CliError(2, "axis k needs a k grid");
    return ex;
}

count_t Experiment::n0_for(count_t n) const {
    count_t n0 = n0_fixed ? *n0_fixed
                          : static_cast<count_t>(std::llround(
                                static_cast<double>(n) / growth_ratio));
    if (n0 < 1) n0 = 1;
    if (n0 > n)
        throw CliError(2, "n0 = " + std::to_string(n0) + " exceeds n = " +
                              std::to_string(n));
    return n0;
}

std::vector<RowSpec> Experiment::grid() const {
    std::vector<RowSpec> specs;
    for (Method m : methods)
        for (count_t n : n_grid) {
            count_t n0 = n0_for(n);
            for (count_t b : b_grid) {
                if (b > n - n0 + 1)
                    throw CliError(
                        2, "b = " + std::to_string(b) +
                               " exceeds the round count n - n0 + 1 = " +
                               std::to_string(n - n0 + 1) + " at n = " +
                               std::to_string(n));
                if (k_grid.empty()) {
                    specs.push_back({m, n, n0, b, std::nullopt});
                } else {
                    for (count_t k : k_grid) specs.push_back({m, n, n0, b, k});
                }
            }
        }
    return specs;
}

OutRow compute_row(const Experiment& ex, const RowSpec& spec) {
    OutRow row;
    row.method = std::string(method_name(spec.method));
    row.n = spec.n;
    row.n0 = spec.n0;
    row.b = spec.b;
    row.beta_prime = ex.beta_prime;

    OptConfig cfg;
    cfg.restarts = ex.restarts;
    cfg.seed = ex.seed;
    GrowthSchedule sched{spec.n0, spec.n};

    if (spec.k) {
        row.k = spec.k;
        AlphaEval e = eval_alpha(spec.method, sched, spec.b, *spec.k, ex.beta_prime,
                            ex.rho, cfg);
        row.alpha_prime = e.alpha;
        row.sigma_opt = e.sigma;
        row.beta_opt = e.beta;
        row.eps_opt = e.eps;
        row.vacuous = !(e.alpha <= 1.0);
        return row;
    }

    AccuracySpec target{ex.alpha_target, ex.beta_prime};
    count_t kmax = max_queries(spec.method, sched, spec.b, target, cfg);
    row.k_max = kmax;
    if (kmax > 0) {
        // Re-evaluate at the found count so the row records the achieved
        // guarantee and the optimizing parameters.
        AlphaEval e = eval_alpha(spec.method, sched, spec.b, kmax, ex.beta_prime,
                            ex.rho, cfg);
        row.alpha_prime = e.alpha;
        row.sigma_opt = e.sigma;
        row.beta_opt = e.beta;
        row.eps_opt = e.eps;
        row.vacuous = !(e.alpha <= 1.0);
    }
    return row;
}

std::vector<OutRow> compute_rows(const Experiment& ex,
                                 std::span<const RowSpec> specs) {
    std::vector<OutRow> rows(specs.size());
    parallel_for(static_cast<std::int64_t>(specs.size()),
                 [&](std::int64_t i) { rows[i] = compute_row(ex, specs[i]); });
    return rows;
}

void write_csv(std::ostream& out, std::span<const OutRow> rows) {
    out << "method,n,n0,b,k,alpha_prime,beta_prime,k_max,sigma_opt,beta_opt,"
           "eps_opt,vacuous\n";
    for (const auto& r : rows) {
        std::string line = r.method;
        cell(line, std::to_string(r.n));
        cell(line, std::to_string(r.n0));
        cell(line, std::to_string(r.b));
        cell(line, r.k ? std::to_string(*r.k) : "");
        cell(line, r.alpha_prime ? fmt17(*r.alpha_prime) : "");
        cell(line, fmt17(r.beta_prime));
        cell(line, r.k_max ? std::to_string(*r.k_max) : "");
        cell(line, r.sigma_opt ? fmt17(*r.sigma_opt) : "");
        cell(line, r.beta_opt ? fmt17(*r.beta_opt) : "");
        cell(line, r.eps_opt ? fmt17(*r.eps_opt) : "");
        cell(line, r.vacuous ? (*r.vacuous ? "1" : "0") : "");
        out << line << '\n';
    }
}

void write_table(std::ostream& out, std::span<const OutRow> rows) {
    auto fmt_opt = [](const std::optional<double>& v) {
        return v ? fmt6(*v) : std::string("-");
    };
    char head[160];
    std::snprintf(head, sizeof head, "%-12s %10s %10s %6s %10s %12s %10s %10s %10s %8s\n",
                  "method", "n", "n0", "b", "k", "alpha'", "k_max", "sigma*",
                  "beta*", "eps*");
    out << head;
    for (const auto& r : rows) {
        char buf[200];
        std::snprintf(
            buf, sizeof buf, "%-12s %10lld %10lld %6lld %10s %12s %10s %10s %10s %8s%s\n",
            r.method.c_str(), static_cast<long long>(r.n),
            static_cast<long long>(r.n0), static_cast<long long>(r.b),
            r.k ? std::to_string(*r.k).c_str() : "-",
            fmt_opt(r.alpha_prime).c_str(),
            r.k_max ? std::to_string(*r.k_max).c_str() : "-",
            fmt_opt(r.sigma_opt).c_str(), fmt_opt(r.beta_opt).c_str(),
            fmt_opt(r.eps_opt).c_str(),
            r.vacuous && *r.vacuous ? "  (vacuous)" : "");
        out << buf;
    }
}

}  // namespace adagrow::cli
