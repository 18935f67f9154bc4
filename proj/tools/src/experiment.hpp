#pragma once

// Bound and sweep row computation.  A resolved experiment is a grid of
// (method, n, b[, k]) points; each point yields one CSV row in the fixed
// schema.  With k given the row carries the accuracy guarantee alpha'; with
// no k it carries the largest query count k_max whose guarantee stays within
// alpha.  Rows are evaluated in parallel and emitted in grid order.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "adagrow/bounds.hpp"
#include "adagrow/schedule.hpp"

#include "config.hpp"

namespace adagrow::cli {

struct RowSpec {
    Method method = Method::OursN;
    count_t n = 0;
    count_t n0 = 0;
    count_t b = 1;
    std::optional<count_t> k;
};

struct OutRow {
    std::string method;
    count_t n = 0;
    count_t n0 = 0;
    count_t b = 1;
    std::optional<count_t> k;
    std::optional<double> alpha_prime;
    double beta_prime = 0.0;
    std::optional<count_t> k_max;
    std::optional<double> sigma_opt;
    std::optional<double> beta_opt;
    std::optional<double> eps_opt;
    std::optional<bool> vacuous;
};

struct Experiment {
    std::vector<Method> methods;
    double alpha_target = 0.1;
    double beta_prime = 0.05;
    std::vector<count_t> n_grid;
    std::vector<count_t> b_grid;
    std::vector<count_t> k_grid;  // empty selects k_max mode
    std::optional<count_t> n0_fixed;
    double growth_ratio = 3.0;
    std::optional<double> rho;  // filter budget for the adaptive method
    std::uint64_t seed = 1;
    int restarts = 32;
    std::string out;
    std::string svg;
    std::string axis;  // n | b | k

    static Experiment resolve(OptionSource& src);

    count_t n0_for(count_t n) const;
    // Method-major, then n, b, k; validates every (n, n0, b) combination.
    std::vector<RowSpec> grid() const;
};

struct AlphaEval {
    double alpha = 0.0;
    std::optional<double> sigma;
    std::optional<double> beta;
    std::optional<double> eps;
};

// alpha' of `method` for k queries in min(b, k) batches at budget beta_prime;
// rho is the adaptive method's filter budget.  The per-round transfer methods
// need inputs the flag set cannot express and throw CliError(2).
AlphaEval eval_alpha(Method method, GrowthSchedule sched, count_t b, count_t k,
                     double beta_prime, std::optional<double> rho,
                     const OptConfig& cfg);

OutRow compute_row(const Experiment& ex, const RowSpec& spec);
// parallel_for over the grid; results land in grid order.
std::vector<OutRow> compute_rows(const Experiment& ex,
                                 std::span<const RowSpec> specs);

// Header `method,n,n0,b,k,alpha_prime,beta_prime,k_max,sigma_opt,beta_opt,
// eps_opt,vacuous`; every column always present, empty where inapplicable,
// doubles at 17 significant digits.
void write_csv(std::ostream& out, std::span<const OutRow> rows);

// Human-readable aligned table for the bound command.
void write_table(std::ostream& out, std::span<const OutRow> rows);

std::vector<Method> parse_method_list(const std::vector<std::string>& names);

}  // namespace adagrow::cli
