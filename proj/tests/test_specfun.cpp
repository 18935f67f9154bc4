#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "adagrow/specfun.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adagrow;
using adagrow::testutil::rel_close;

TEST_SUITE("specfun") {

// [ORACLE] constants below: mpmath dps=50 via tests/oracle_gen.py.

TEST_CASE("erfc matches high-precision references") {
    CHECK(rel_close(adagrow::erfc(0.5), 0.47950012218695346, 1e-14));
    CHECK(rel_close(adagrow::erfc(1.0), 0.15729920705028513, 1e-14));
    CHECK(rel_close(adagrow::erfc(3.0), 2.2090496998585441e-05, 1e-13));
    CHECK(rel_close(adagrow::erfc(10.0), 2.088487583762545e-45, 1e-13));
    CHECK(rel_close(adagrow::erfc(26.0), 5.663192408856143e-296, 1e-12));
    CHECK(rel_close(adagrow::erfc(-1.0), 1.8427007929497149, 1e-14));
    CHECK(adagrow::erfc(0.0) == 1.0);
}

TEST_CASE("erfc reflection and monotonicity") {
    for (double x : {0.1, 0.7, 1.3, 2.9, 4.2})
        CHECK(rel_close(adagrow::erfc(-x), 2.0 - adagrow::erfc(x), 1e-14));
    double prev = adagrow::erfc(-6.0);
    for (double x = -5.5; x <= 6.0; x += 0.5) {
        CHECK(adagrow::erfc(x) < prev);
        prev = adagrow::erfc(x);
    }
}

TEST_CASE("erfc rejects non-finite input") {
    CHECK_THROWS_AS(adagrow::erfc(std::numeric_limits<double>::quiet_NaN()),
                    std::domain_error);
    CHECK_THROWS_AS(adagrow::erfc(std::numeric_limits<double>::infinity()),
                    std::domain_error);
}

TEST_CASE("log_erfc survives the underflow region") {
    CHECK(rel_close(log_erfc(30.0), -903.9741171106439, 1e-11));
    CHECK(rel_close(log_erfc(100.0), -10005.177585122664, 1e-12));
    // agreement with direct log where erfc is representable
    for (double x : {0.0, 0.5, 1.0, 5.0, 10.0, 25.0})
        CHECK(rel_close(log_erfc(x), std::log(adagrow::erfc(x)), 1e-13));
}

TEST_CASE("erfc_inv matches references and symmetry") {
    CHECK(rel_close(erfc_inv(0.5), 0.4769362762044699, 1e-13));
    CHECK(rel_close(erfc_inv(1e-10), 4.572824967389485, 1e-13));
    CHECK(rel_close(erfc_inv(1e-100), 15.065574702592646, 1e-13));
    CHECK(rel_close(erfc_inv(1e-280), 25.3163826554985, 1e-13));
    CHECK(rel_close(erfc_inv(1.5), -0.4769362762044699, 1e-13));
    CHECK(rel_close(erfc_inv(1.999), -2.3267537655135247, 1e-13));
    CHECK(erfc_inv(1.0) == 0.0);
    // 2 - p itself rounds before the call, so the symmetry is only exact up
    // to that input perturbation
    for (double p : {1e-8, 1e-3, 0.2, 0.8, 1.2})
        CHECK(rel_close(erfc_inv(2.0 - p), -erfc_inv(p), 1e-7));
}

TEST_CASE("erfc_inv round-trips across the full domain") {
    // log-spaced p from the deep tail up to 1, plus mirrored values
    for (double lp = std::log(1e-280); lp < 0.0; lp += 3.1) {
        double p = std::exp(lp);
        double x = erfc_inv(p);
        CHECK_MESSAGE(rel_close(adagrow::erfc(x) > 0.0 ? std::log(adagrow::erfc(x)) : log_erfc(x),
                                lp, 1e-11),
                      "p = " << p);
    }
    for (double p = 0.05; p < 2.0; p += 0.1)
        CHECK(rel_close(adagrow::erfc(erfc_inv(p)), p, 1e-12));
}

TEST_CASE("erfc_inv rejects out-of-domain arguments") {
    CHECK_THROWS_AS(erfc_inv(0.0), std::domain_error);
    CHECK_THROWS_AS(erfc_inv(2.0), std::domain_error);
    CHECK_THROWS_AS(erfc_inv(-0.3), std::domain_error);
    CHECK_THROWS_AS(erfc_inv(std::numeric_limits<double>::quiet_NaN()),
                    std::domain_error);
}

TEST_CASE("log_add_exp handles extreme magnitudes") {
    const double ninf = -std::numeric_limits<double>::infinity();
    CHECK(rel_close(log_add_exp(std::log(2.0), std::log(3.0)), std::log(5.0),
                    1e-15));
    CHECK(log_add_exp(ninf, 1.5) == 1.5);
    CHECK(log_add_exp(1.5, ninf) == 1.5);
    CHECK(log_add_exp(ninf, ninf) == ninf);
    // values whose exp overflows: exp(800) + exp(801) = exp(801)(1 + e^-1)
    CHECK(rel_close(log_add_exp(800.0, 801.0), 801.0 + std::log1p(std::exp(-1.0)),
                    1e-15));
}

TEST_CASE("log_sum_exp reduces consistently") {
    std::vector<double> v = {std::log(1.0), std::log(2.0), std::log(4.0)};
    CHECK(rel_close(log_sum_exp(v), std::log(7.0), 1e-15));
    std::vector<double> big = {1000.0, 1000.0, 1000.0};
    CHECK(rel_close(log_sum_exp(big), 1000.0 + std::log(3.0), 1e-15));
    std::vector<double> empty;
    CHECK(log_sum_exp(empty) == -std::numeric_limits<double>::infinity());
    // pairwise fold agrees with the batch version
    double fold = -std::numeric_limits<double>::infinity();
    for (double x : v) fold = log_add_exp(fold, x);
    CHECK(rel_close(fold, log_sum_exp(v), 1e-14));
}

}  // TEST_SUITE
