#!/usr/bin/env python3
"""Regenerates the frozen reference constants embedded in the C++ tests.

Every [ORACLE] constant in tests/*.cpp is computed here with mpmath at 50
significant digits, using formulations independent of the C++ code paths
(e.g. the psi minimizer is found by root-finding the stationarity condition
rather than golden-section search).  Run and paste the printed values when a
formula changes.
"""

import mpmath as mp

mp.mp.dps = 50


def p(label, value):
    print(f"{label:40s} {mp.nstr(mp.mpf(value), 20)}")


# --- special functions ------------------------------------------------------
p("erfc(1)", mp.erfc(1))
p("erfc(0.5)", mp.erfc(0.5))
p("erfc(3)", mp.erfc(3))
p("erfc(10)", mp.erfc(10))
p("erfc(26)", mp.erfc(26))
p("erfc(-1)", mp.erfc(-1))
p("log(erfc(30))", mp.log(mp.erfc(30)))
p("log(erfc(100))", mp.log(mp.erfc(100)))
p("erfc_inv(0.5)", mp.erfinv(1 - mp.mpf("0.5")))
p("erfc_inv(1.5)", mp.erfinv(1 - mp.mpf("1.5")))
p("erfc_inv(1.999)", mp.erfinv(1 - mp.mpf("1.999")))
# tiny arguments: root-find log erfc(x) = log p at boosted precision, since
# 1 - p rounds to 1 beyond the working precision
with mp.workdps(400):
    for pv in ("1e-10", "1e-100", "1e-280"):
        pt = mp.mpf(pv)
        x = mp.findroot(lambda x: mp.log(mp.erfc(x)) - mp.log(pt), mp.mpf(20))
        p(f"erfc_inv({pv})", x)


# --- psi and its minimizer --------------------------------------------------
def log_psi(g, rho, eps):
    g, rho, eps = mp.mpf(g), mp.mpf(rho), mp.mpf(eps)
    return (g - 1) * (g * rho - eps) + g * mp.log(1 - 1 / g) - mp.log(g - 1)


def psi(g, rho, eps):
    return mp.e ** log_psi(g, rho, eps)


def gamma_star(rho, eps):
    # stationarity: d/dg log psi = 2 g rho - rho - eps + log(1 - 1/g) = 0
    rho, eps = mp.mpf(rho), mp.mpf(eps)
    f = lambda g: 2 * g * rho - rho - eps + mp.log(1 - 1 / g)
    g = mp.findroot(f, mp.mpf(2))
    return g


p("psi(2, 0.1, 0.5)", psi(2, "0.1", "0.5"))
p("log_psi(2, 0.1, 0.5)", log_psi(2, "0.1", "0.5"))
p("psi(1.5, 0.02, 0)", psi("1.5", "0.02", 0))

for rho, eps in [("0.05", "0.5"), ("0.3", "1.0"), ("0.001", "0.1")]:
    g = gamma_star(rho, eps)
    p(f"gamma_star({rho}, {eps})", g)
    p(f"log_psi@gamma_star({rho}, {eps})", log_psi(g, rho, eps))


# --- dense lambda objective oracle ------------------------------------------
def lambda_oracle(n0, n, rounds, sizes, sigma, beta, eps, beta_prime,
                  uniform):
    """lambda for queries placed at `rounds` with counts `sizes`."""
    sigma = mp.mpf(sigma)
    beta = mp.mpf(beta)
    eps = mp.mpf(eps)
    beta_prime = mp.mpf(beta_prime)
    k = sum(sizes)
    per_round = [0] * (n + 1)
    for r, s in zip(rounds, sizes):
        per_round[r] = s
    rho = [mp.mpf(0)] * (n + 2)
    for t in range(n, 0, -1):
        rho[t] = rho[t + 1] + per_round[t] / (2 * sigma**2 * mp.mpf(t) ** 2)
    g = gamma_star(rho[1], eps)
    delta = [min(mp.mpf(1), psi(g, rho[t], eps)) for t in range(1, n + 1)]
    if uniform:
        s_delta = n * max(delta)
    else:
        s_delta = sum(delta)
    s = s_delta / n0
    lam = (
        mp.sqrt(2) * sigma * mp.erfinv(1 - beta / k)
        + mp.e**eps - 1
        + beta / beta_prime
        + 2 * s / beta_prime
        + (2 / beta_prime) * mp.sqrt(2 * beta * s)
    )
    return lam


p(
    "lambda(n0=10,n=30,r=[16,23,30],s=[4,4,4],sig=.3,b=1e-3,e=.2,bp=.05,nonunif)",
    lambda_oracle(10, 30, [16, 23, 30], [4, 4, 4], "0.3", "0.001", "0.2",
                  "0.05", False),
)
p(
    "lambda same uniform",
    lambda_oracle(10, 30, [16, 23, 30], [4, 4, 4], "0.3", "0.001", "0.2",
                  "0.05", True),
)

# --- static baseline objectives ---------------------------------------------
def jung_static(n, k, beta, sigma, delta):
    n, k = mp.mpf(n), mp.mpf(k)
    beta, sigma, delta = mp.mpf(beta), mp.mpf(sigma), mp.mpf(delta)
    first = mp.sqrt(2) * sigma * mp.erfinv(1 - delta / k)
    logarg = mp.log(mp.sqrt(mp.pi * k) / (mp.sqrt(2) * n * sigma * delta))
    inner = k / (2 * n**2 * sigma**2) + mp.sqrt(
        (2 * k / (n**2 * sigma**2)) * logarg
    )
    return first + mp.e**inner - 1 + 6 * delta / beta


def jung_plus_static(n, k, beta_prime, sigma, beta, eps):
    n, k = mp.mpf(n), mp.mpf(k)
    beta_prime, sigma = mp.mpf(beta_prime), mp.mpf(sigma)
    beta, eps = mp.mpf(beta), mp.mpf(eps)
    rho = k / (2 * sigma**2 * n**2)
    g = gamma_star(rho, eps)
    delta = min(mp.mpf(1), psi(g, rho, eps))
    return (
        mp.sqrt(2) * sigma * mp.erfinv(1 - beta / k)
        + mp.e**eps - 1
        + beta / beta_prime
        + 2 * delta / beta_prime
        + (2 / beta_prime) * mp.sqrt(2 * beta * delta)
    )


p("jung_static(1000,100,.1,.01,1e-4)", jung_static(1000, 100, "0.1", "0.01", "1e-4"))
p("jung_plus(1000,100,.05,.01,1e-4,.1)",
  jung_plus_static(1000, 100, "0.05", "0.01", "1e-4", "0.1"))

# --- split ------------------------------------------------------------------
for n, k, beta in [(10000, 100, "0.05"), (300000, 1000, "0.05")]:
    a = mp.sqrt(k * mp.log(2 * k / mp.mpf(beta)) / (2 * mp.mpf(n)))
    p(f"split_alpha({n},{k},{beta})", a)

# --- snapshot accuracy ------------------------------------------------------
def snapshot_alpha_exact(sigma, k, beta):
    sigma, beta = mp.mpf(sigma), mp.mpf(beta)
    arg = 2 - 2 * (1 - beta / 2) ** (mp.mpf(1) / k)
    return mp.sqrt(2) * sigma * mp.erfinv(1 - arg)


p("snapshot_alpha_exact(.05,20,.1)", snapshot_alpha_exact("0.05", 20, "0.1"))
p("snapshot_alpha_loose(.05,20,.1)",
  mp.sqrt(2) * mp.mpf("0.05") * mp.erfinv(1 - mp.mpf("0.1") / 20))

# --- scalar optimization test function ----------------------------------------
x = mp.findroot(lambda x: 4 * x**3 - 6 * x + 1, mp.mpf("1.1"))
p("argmin x^4-3x^2+x on [0,2]", x)
p("min value", x**4 - 3 * x**2 + x)

# --- Wilson interval --------------------------------------------------------
def wilson(f, n, z):
    f, n, z = mp.mpf(f), mp.mpf(n), mp.mpf(z)
    ph = f / n
    den = 1 + z**2 / n
    ctr = ph + z**2 / (2 * n)
    spr = z * mp.sqrt(ph * (1 - ph) / n + z**2 / (4 * n**2))
    return (ctr - spr) / den, (ctr + spr) / den


z99 = mp.mpf("2.5758293035489004")
lo, hi = wilson(13, 1000, z99)
p("wilson(13,1000).low", lo)
p("wilson(13,1000).high", hi)
lo, hi = wilson(0, 10000, z99)
p("wilson(0,10000).high", hi)
