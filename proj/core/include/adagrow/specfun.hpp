#pragma once

// Special functions used by the accuracy and privacy formulas: the
// complementary error function, its inverse, and log-domain helpers for
// sums of exponentials that would overflow or underflow naively.

#include <span>

namespace adagrow {

// Tolerance knobs shared by iterative numeric routines.
struct Tolerance {
    double rel_err = 1e-12;  // > 0
    int max_iter = 200;      // >= 1
};

// erfc(x) = 2/sqrt(pi) * integral_x^inf exp(-t^2) dt.
// Finite for all finite x; tail values stay representable down to the
// smallest normal double (erfc(26.5) ~ 1.4e-306).  Throws std::domain_error
// on non-finite input.
double erfc(double x);

// log(erfc(x)) evaluated without underflow for x >= 0 (usable wherever
// erfc itself is representable; falls back to log(erfc(x)) elsewhere).
double log_erfc(double x);

// Inverse of erfc on (0, 2): erfc(erfc_inv(p)) = p.
// erfc_inv(1) = 0; erfc_inv(2 - p) = -erfc_inv(p).
// Rational initial estimate refined by Newton steps on erfc; a dedicated
// asymptotic branch keeps full relative accuracy down to p = 1e-280.
// Throws std::domain_error for p outside (0, 2) or non-finite p.
double erfc_inv(double p);

// log(exp(a) + exp(b)) without overflow; -inf inputs behave as exp = 0.
double log_add_exp(double a, double b);

// log(sum_i exp(v[i])) without overflow; empty input yields -inf.
double log_sum_exp(std::span<const double> v);

}  // namespace adagrow
