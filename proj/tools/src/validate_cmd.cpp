#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "adagrow/validate.hpp"

#include "commands.hpp"
#include "textio.hpp"

namespace adagrow::cli {

namespace {

void report(std::ostream& out, bool* all_pass, const std::string& name,
            bool pass, const std::string& detail) {
    out << (pass ? "[PASS] " : "[FAIL] ") << name;
    for (std::size_t i = name.size(); i < 28; ++i) out << ' ';
    out << ' ' << detail << '\n';
    *all_pass = *all_pass && pass;
}

}  // namespace

int run_validate(std::ostream& out) {
    bool all_pass = true;

    // Exact enumeration of the resampling identity on every toy instance.
    for (const auto& toy : shipped_toy_instances()) {
        double d = resampling_check(toy);
        report(out, &all_pass, "resampling." + toy.name, d <= 1e-12,
               "max discrepancy " + fmt6(d) + " (tol 1e-12)");
    }

    // The exact max-of-Gaussians bound never exceeds the loose closed form.
    {
        bool ok = true;
        double worst = 0.0;
        for (double sigma : {0.01, 0.05, 0.2})
            for (count_t k : {count_t{1}, count_t{20}, count_t{1000}})
                for (double beta : {0.01, 0.1, 0.5}) {
                    double exact = snapshot_alpha_exact(sigma, k, beta);
                    double loose = snapshot_alpha_loose(sigma, k, beta);
                    ok = ok && exact <= loose * (1.0 + 1e-12);
                    worst = std::max(worst, exact / loose);
                }
        report(out, &all_pass, "snapshot.exact-le-loose", ok,
               "max exact/loose ratio " + fmt6(worst));
    }

    // Conversion minimizer against the brute-force gamma grid; negative gaps
    // mean the continuous minimizer beat the grid's resolution.
    {
        Rng rng(0xC0117E57ULL);
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < 16; ++i) {
            double rho = std::exp(std::log(1e-3) +
                                  rng.uniform01() * std::log(1e3));
            double eps = 2.0 * rng.uniform01();
            worst = std::max(worst, conversion_crosscheck(rho, eps));
        }
        report(out, &all_pass, "conversion.grid", worst <= 1e-6,
               "max signed gap (ours - grid)/grid " + fmt6(worst) +
                   " (tol 1e-6)");
    }

    // Monte Carlo certificate of the per-round snapshot guarantee.
    {
        auto alloc = batch_allocation(20, 10, GrowthSchedule{30, 60});
        McAccuracy mc =
            mc_snapshot_accuracy(Distribution::uniform(Domain{32, {}}), 0.05,
                                 alloc, 0.1, 4000, 0x5EEDFACEULL);
        report(out, &all_pass, "snapshot.mc-wilson",
               mc.wilson_high <= mc.beta,
               "failure rate " + fmt6(mc.rate) + ", 99% Wilson upper " +
                   fmt6(mc.wilson_high) + " <= beta " + fmt6(mc.beta));
    }

    // Slope fitting recovers exact power laws.
    {
        std::vector<std::pair<double, double>> quad, lin;
        for (double x : {1e3, 1e4, 1e5, 1e6}) {
            quad.emplace_back(x, 3.0 * x * x);
            lin.emplace_back(x, 0.5 * x);
        }
        double s2 = slope_fit(quad);
        double s1 = slope_fit(lin);
        bool ok = std::fabs(s2 - 2.0) <= 1e-9 && std::fabs(s1 - 1.0) <= 1e-9;
        report(out, &all_pass, "slope.synthetic", ok,
               "quadratic " + fmt6(s2) + ", linear " + fmt6(s1));
    }

    out << (all_pass ? "validate: all oracles passed\n"
                     : "validate: FAILURES reported above\n");
    return all_pass ? 0 : 1;
}

}  // namespace adagrow::cli
