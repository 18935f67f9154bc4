#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "adagrow/privacy.hpp"
#include "adagrow/schedule.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adagrow;
using adagrow::testutil::rel_close;

namespace {

QueryAllocation two_round_alloc() {
    QueryAllocation alloc;
    alloc.schedule = {2, 3};
    alloc.per_round = {0, 1, 1};
    alloc.total = 2;
    return alloc;
}

}  // namespace

TEST_SUITE("privacy") {

TEST_CASE("rho curve accumulates suffix charges") {
    RhoCurve rc = gauss_rho_curve(two_round_alloc(), 1.0);
    REQUIRE(rc.rho.size() == 3);
    CHECK(rel_close(rc.rho[2], 1.0 / 18.0, 1e-15));
    CHECK(rel_close(rc.rho[1], 1.0 / 8.0 + 1.0 / 18.0, 1e-15));
    CHECK(rc.rho[0] == rc.rho[1]);  // no queries in round 1
    CHECK(rel_close(rc.max(), 1.0 / 8.0 + 1.0 / 18.0, 1e-15));
}

TEST_CASE("per-round noise scales enter each charge separately") {
    std::vector<double> sigma = {0.1, 0.5, 2.0};
    RhoCurve rc = gauss_rho_curve(two_round_alloc(), sigma);
    CHECK(rel_close(rc.rho[2], 1.0 / 72.0, 1e-15));
    CHECK(rel_close(rc.rho[1], 0.5 + 1.0 / 72.0, 1e-15));
}

TEST_CASE("rho curve rejects bad inputs") {
    QueryAllocation alloc = two_round_alloc();
    std::vector<double> bad_sigma = {1.0, 0.0, 1.0};  // zero on active round
    CHECK_THROWS_AS(gauss_rho_curve(alloc, bad_sigma), std::invalid_argument);
    std::vector<double> short_sigma = {1.0};
    CHECK_THROWS_AS(gauss_rho_curve(alloc, short_sigma), std::invalid_argument);
    alloc.total = 5;
    CHECK_THROWS_AS(gauss_rho_curve(alloc, 1.0), std::invalid_argument);
}

TEST_CASE("curves compose pointwise") {
    RhoCurve a = gauss_rho_curve(two_round_alloc(), 1.0);
    RhoCurve b = gauss_rho_curve(two_round_alloc(), 0.5);
    RhoCurve c = compose_rho(a, b);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(rel_close(c.rho[i], a.rho[i] + b.rho[i], 1e-15));
    RhoCurve shorter;
    shorter.rho = {0.1};
    CHECK_THROWS_AS(compose_rho(a, shorter), std::invalid_argument);
}

TEST_CASE("psi matches closed-form references") {
    // [ORACLE] mpmath dps=50, tests/oracle_gen.py
    CHECK(rel_close(psi(2.0, 0.1, 0.5), 0.18520455517042947, 1e-13));
    CHECK(rel_close(log_psi(2.0, 0.1, 0.5), -1.6862943611198906, 1e-13));
    CHECK(rel_close(psi(1.5, 0.02, 0.0), 0.39071720074252755, 1e-13));
    CHECK(rel_close(psi(2.0, 0.1, 0.5), std::exp(log_psi(2.0, 0.1, 0.5)),
                    1e-15));
}

TEST_CASE("psi overflow saturates to infinity") {
    CHECK(std::isinf(psi(1e6, 10.0, 0.0)));
    CHECK(log_psi(1e6, 10.0, 0.0) > 1e12);
}

TEST_CASE("psi rejects out-of-domain parameters") {
    CHECK_THROWS_AS(log_psi(1.0, 0.1, 0.1), std::domain_error);
    CHECK_THROWS_AS(log_psi(0.5, 0.1, 0.1), std::domain_error);
    CHECK_THROWS_AS(log_psi(2.0, -0.1, 0.1), std::domain_error);
    CHECK_THROWS_AS(log_psi(2.0, 0.1, -0.1), std::domain_error);
}

TEST_CASE("gamma_star matches stationarity-derived references") {
    // [ORACLE] root of 2 g rho - rho - eps + log(1 - 1/g) = 0, mpmath dps=50
    GammaStar gs = gamma_star(0.05, 0.5);
    CHECK(rel_close(gs.gamma, 7.033558064357449, 1e-6));
    CHECK(rel_close(gs.log_psi, -3.7708838493803986, 5e-13));
    CHECK_FALSE(gs.at_boundary);

    gs = gamma_star(0.3, 1.0);
    CHECK(rel_close(gs.gamma, 2.878112390702534, 1e-6));
    CHECK(rel_close(gs.log_psi, -2.1153265050045013, 5e-13));

    gs = gamma_star(0.001, 0.1);
    CHECK(rel_close(gs.gamma, 59.04120091210764, 1e-6));
    CHECK(rel_close(gs.log_psi, -7.4470165240572234, 5e-13));
}

TEST_CASE("gamma_star is a local minimum of log_psi") {
    for (double rho : {0.01, 0.2, 1.5})
        for (double eps : {0.0, 0.3, 2.0}) {
            GammaStar gs = gamma_star(rho, eps);
            if (gs.at_boundary) continue;
            double up = log_psi(gs.gamma * (1.0 + 1e-4), rho, eps);
            double dn = log_psi(1.0 + (gs.gamma - 1.0) * (1.0 - 1e-4), rho, eps);
            CHECK(gs.log_psi <= up + 1e-12);
            CHECK(gs.log_psi <= dn + 1e-12);
        }
}

TEST_CASE("gamma_star reports the boundary when rho vanishes") {
    GammaStar gs = gamma_star(0.0, 0.5);
    CHECK(gs.at_boundary);
    CHECK(gs.gamma > 1e5);  // pushed to the upper search limit
}

TEST_CASE("delta curve mirrors psi at the shared gamma") {
    RhoCurve rc;
    rc.rho = {0.3, 0.3, 0.2, 0.05};
    DeltaCurve dc = zcdp_to_approx_dp(rc, 1.0);
    GammaStar gs = gamma_star(0.3, 1.0);
    REQUIRE(dc.delta.size() == 4);
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double expect = std::min(1.0, psi(gs.gamma, rc.rho[i], 1.0));
        CHECK(rel_close(dc.delta[i], expect, 1e-12));
        sum += dc.delta[i];
    }
    CHECK(rel_close(dc.sum, sum, 1e-15));
    CHECK(dc.epsilon == 1.0);
    CHECK_FALSE(dc.clamped);
    // suffix-sum curves are nonincreasing, so delta must be too
    for (std::size_t i = 1; i < 4; ++i) CHECK(dc.delta[i] <= dc.delta[i - 1]);
}

TEST_CASE("uniform conversion pins every round at the worst delta") {
    RhoCurve rc;
    rc.rho = {0.3, 0.2, 0.05};
    DeltaCurve nu = zcdp_to_approx_dp(rc, 0.5);
    DeltaCurve un = zcdp_to_approx_dp_uniform(rc, 0.5);
    double worst = *std::max_element(nu.delta.begin(), nu.delta.end());
    for (double d : un.delta) CHECK(d == worst);
    CHECK(un.sum >= nu.sum);
}

TEST_CASE("hopeless budgets clamp delta at one") {
    RhoCurve rc;
    rc.rho = {50.0};
    DeltaCurve dc = zcdp_to_approx_dp(rc, 0.1);
    CHECK(dc.delta[0] == 1.0);
    CHECK(dc.clamped);
}

TEST_CASE("delta shrinks as epsilon grows") {
    RhoCurve rc;
    rc.rho = {0.2};
    double prev = 1.1;
    for (double eps : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        double d = zcdp_to_approx_dp(rc, eps).delta[0];
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("filter approves until the budget would be exceeded") {
    FilterState st;
    st.target_rho = 0.1;
    CHECK(filter_charge(st, 1.2, 3) == FilterDecision::approve);
    CHECK(rel_close(st.spent_rho, 1.0 / 25.92, 1e-15));
    CHECK(filter_charge(st, 1.5, 2) == FilterDecision::approve);
    CHECK(rel_close(st.spent_rho, 1.0 / 25.92 + 1.0 / 18.0, 1e-15));
    // next charge 1/32 would push past 0.1: refuse without spending
    double before = st.spent_rho;
    CHECK(filter_charge(st, 1.0, 4) == FilterDecision::terminate);
    CHECK(st.terminated);
    CHECK(st.spent_rho == before);
    CHECK(st.spent_rho <= st.target_rho);
    CHECK_THROWS_AS(filter_charge(st, 1.0, 5), std::logic_error);
}

TEST_CASE("filter refuses immediately when the first charge is too big") {
    FilterState st;
    st.target_rho = 0.05;
    CHECK(filter_charge(st, 1.0, 2) == FilterDecision::terminate);
    CHECK(st.spent_rho == 0.0);
    CHECK(st.terminated);
}

TEST_CASE("filter accepts a charge landing exactly on the target") {
    FilterState st;
    st.target_rho = 1.0 / 8.0;
    CHECK(filter_charge(st, 1.0, 2) == FilterDecision::approve);
    CHECK(st.spent_rho == st.target_rho);
}

}  // TEST_SUITE
