#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <sstream>

#include "adagrow/interact.hpp"
#include "adagrow/parallel.hpp"
#include "adagrow/validate.hpp"

#include "commands.hpp"
#include "experiment.hpp"
#include "textio.hpp"

namespace adagrow::cli {

namespace {

struct SimConfig {
    GrowthSchedule sched;
    Distribution dist;
    Domain dom;
    std::string analyst;     // fixed | attack
    std::string query_kind;  // binary | boundary
    double sigma = 0.0;
    bool clipped = true;
    count_t trials = 1;
    count_t k = 0;
    count_t b = 1;
    double final_fraction = 1.0;
    std::optional<double> filter_rho;
    std::uint64_t seed = 1;
    std::string out;
    std::string transcript_out;
    std::optional<double> envelope;  // alpha' printed alongside the errors
};

struct ArmResult {
    std::string arm;
    ErrorCurves curves;
    std::vector<count_t> counts;
    count_t answered = 0;
    bool terminated = false;
    count_t last_round = 0;  // last round with an answered query, 0 if none
    double worst_snap = 0.0;
    double worst_dist = 0.0;
    double spent_rho = 0.0;
    double last_resp = 0.0;  // final answered exchange; the attack's
    double last_dist_err = 0.0;   // correlation query when nothing terminated
    double last_snap_err = 0.0;
    std::vector<std::vector<double>> responses;  // only with transcript output
};

SimConfig resolve_sim(OptionSource& src) {
    SimConfig cfg;

    auto n_list = src.count_list("n");
    if (n_list.size() != 1)
        throw CliError(2, "simulate needs exactly one n value");
    count_t n = n_list[0];
    if (n < 1) throw CliError(2, "n: must be >= 1");

    int rank_n0 = src.rank("n0");
    int rank_ratio = src.rank("growth-ratio");
    if (rank_n0 > 0 && rank_n0 == rank_ratio)
        throw CliError(2, "give n0 or growth-ratio, not both");
    count_t n0;
    if (rank_n0 > rank_ratio) {
        n0 = src.count("n0", 1);
    } else {
        double ratio = src.f64("growth-ratio", 3.0);
        if (!(ratio >= 1.0)) throw CliError(2, "growth-ratio: must be >= 1");
        n0 = static_cast<count_t>(std::llround(static_cast<double>(n) / ratio));
    }
    if (n0 < 1) n0 = 1;
    if (n0 > n)
        throw CliError(2, "n0 = " + std::to_string(n0) + " exceeds n = " +
                              std::to_string(n));
    cfg.sched = {n0, n};

    auto weights = src.f64_list("weights");
    if (!weights.empty()) {
        cfg.dist = Distribution::from_weights(weights);
        cfg.dom = Domain{static_cast<count_t>(weights.size()), {}};
    } else {
        count_t ds = src.count("domain-size", 16);
        if (ds < 2) throw CliError(2, "domain-size: must be >= 2");
        cfg.dom = Domain{ds, {}};
        cfg.dist = Distribution::uniform(cfg.dom);
    }

    cfg.analyst = src.str("analyst", "fixed");
    if (cfg.analyst != "fixed" && cfg.analyst != "attack")
        throw CliError(2, "analyst: must be fixed or attack");
    cfg.query_kind = src.str("queries", "binary");
    if (cfg.query_kind != "binary" && cfg.query_kind != "boundary")
        throw CliError(2, "queries: must be binary or boundary");

    auto sigma = src.f64_opt("sigma");
    if (!sigma) throw CliError(2, "sigma: required for simulate");
    if (!(*sigma >= 0.0) || !std::isfinite(*sigma))
        throw CliError(2, "sigma: must be a finite value >= 0");
    cfg.sigma = *sigma;
    cfg.clipped = src.boolean("clipped", true);

    cfg.trials = src.count("trials", 1);
    if (cfg.trials < 1) throw CliError(2, "trials: must be >= 1");

    auto k = src.count_opt("k");
    if (!k) throw CliError(2, "k: required for simulate");
    cfg.k = *k;
    if (cfg.k < 1) throw CliError(2, "k: must be >= 1");
    if (cfg.analyst == "attack" && cfg.k < 2)
        throw CliError(2, "the attack analyst needs k >= 2");

    count_t rounds = n - n0 + 1;
    cfg.b = src.count("b", std::min(cfg.k, rounds));
    if (cfg.b < 1) throw CliError(2, "b: must be >= 1");
    if (cfg.b > rounds)
        throw CliError(2, "b = " + std::to_string(cfg.b) +
                              " exceeds the round count n - n0 + 1 = " +
                              std::to_string(rounds));

    cfg.final_fraction = src.f64("final-fraction", 1.0);
    if (!(cfg.final_fraction > 0.0) || cfg.final_fraction > 1.0)
        throw CliError(2, "final-fraction: must lie in (0, 1]");

    cfg.filter_rho = src.f64_opt("filter-rho");
    if (cfg.filter_rho) {
        if (!(*cfg.filter_rho > 0.0))
            throw CliError(2, "filter-rho: must be > 0");
        if (!(cfg.sigma > 0.0))
            throw CliError(2, "filter-rho: the filter needs sigma > 0");
    }

    cfg.seed = src.u64("seed", 1);
    cfg.out = src.str("out", "");
    cfg.transcript_out = src.str("transcript-out", "");

    std::string bm = src.str("bound", "");
    if (!bm.empty()) {
        if (cfg.analyst != "fixed")
            throw CliError(2, "bound envelope requires the fixed analyst");
        auto m = parse_method(bm);
        if (!m) throw CliError(2, "bound: unknown method '" + bm + "'");
        OptConfig oc;
        oc.restarts = static_cast<int>(src.count("restarts", 32));
        if (oc.restarts < 1) throw CliError(2, "restarts: must be >= 1");
        oc.seed = cfg.seed;
        double bp = src.f64("beta-prime", 0.05);
        if (!(bp > 0.0) || !(bp < 1.0))
            throw CliError(2, "beta-prime: must lie in (0, 1)");
        cfg.envelope =
            eval_alpha(*m, cfg.sched, cfg.b, cfg.k, bp, cfg.filter_rho, oc)
                .alpha;
    }
    return cfg;
}

ArmResult run_arm(const SimConfig& cfg, count_t trial, double sigma,
                  bool filtered, const char* name, bool record_responses) {
    std::uint64_t ts = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));

    Analyst analyst;
    if (cfg.analyst == "fixed") {
        QueryAllocation alloc =
            batch_allocation(cfg.k, std::min(cfg.b, cfg.k), cfg.sched);
        Rng qr = Rng::stream(ts, 2);
        std::function<StatQuery(count_t)> source;
        if (cfg.query_kind == "binary") {
            Domain dom = cfg.dom;
            source = [dom, qr](count_t) mutable {
                return random_binary_query(dom, qr);
            };
        } else {
            QueryMaker mk = boundary_biased_queries(cfg.dom);
            source = [mk, qr](count_t i) mutable { return mk(i, qr); };
        }
        analyst = fixed_schedule_analyst(std::move(alloc), std::move(source));
    } else {
        analyst = attack_analyst(cfg.dom, cfg.sched, cfg.k, cfg.final_fraction,
                                 Rng::stream(ts, 2));
    }

    std::shared_ptr<FilterState> state;
    Mechanism mech;
    if (filtered) {
        state = std::make_shared<FilterState>();
        state->target_rho = *cfg.filter_rho;
        mech = filtered_gaussian_mechanism(sigma, cfg.clipped, state);
    } else {
        mech = gaussian_mechanism(sigma, cfg.clipped);
    }

    InteractionResult run =
        run_interaction(analyst, mech, cfg.dist, cfg.sched, ts);

    ArmResult res;
    res.arm = name;
    res.curves = empirical_errors(run.data, run.transcript, cfg.dist);
    res.counts = run.transcript.per_round_counts();
    res.terminated = run.transcript.terminated;
    if (state) res.spent_rho = state->spent_rho;
    for (count_t t = 1; t <= static_cast<count_t>(res.counts.size()); ++t) {
        count_t c = res.counts[static_cast<std::size_t>(t - 1)];
        if (c > 0) {
            res.answered += c;
            res.last_round = t;
        }
    }
    for (count_t t = cfg.sched.n0; t <= cfg.sched.n; ++t) {
        res.worst_snap = std::max(
            res.worst_snap, res.curves.snapshot[static_cast<std::size_t>(t - 1)]);
        res.worst_dist = std::max(
            res.worst_dist,
            res.curves.distributional[static_cast<std::size_t>(t - 1)]);
    }
    if (res.last_round > 0) {
        const auto& last =
            run.transcript.rounds[static_cast<std::size_t>(res.last_round - 1)]
                .back();
        res.last_resp = last.response;
        res.last_dist_err =
            std::fabs(last.response - eval_query_dist(*last.query, cfg.dist));
        res.last_snap_err = std::fabs(
            last.response -
            eval_query_snapshot(*last.query, run.data, res.last_round));
    }
    if (record_responses) {
        res.responses.resize(run.transcript.rounds.size());
        for (std::size_t t = 0; t < run.transcript.rounds.size(); ++t)
            for (const auto& ex : run.transcript.rounds[t])
                res.responses[t].push_back(ex.response);
    }
    return res;
}

}  // namespace

int run_simulate(OptionSource& src) {
    SimConfig cfg = resolve_sim(src);
    const bool attack = cfg.analyst == "attack";
    const bool keep_responses = !cfg.transcript_out.empty();

    std::vector<std::vector<ArmResult>> trials(
        static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, [&](std::int64_t i) {
        std::vector<ArmResult> arms;
        arms.push_back(run_arm(cfg, i, cfg.sigma, cfg.filter_rho.has_value(),
                               "gauss", keep_responses));
        // The reference arm answers exactly (zero noise, never filtered) on
        // the same dataset and probe draws.
        if (attack) arms.push_back(run_arm(cfg, i, 0.0, false, "exact",
                                           keep_responses));
        trials[static_cast<std::size_t>(i)] = std::move(arms);
    });

    if (!cfg.out.empty()) {
        std::ostringstream csv;
        csv << "trial,arm,round,queries,snapshot_error,dist_error,alpha_bound\n";
        std::string envelope = cfg.envelope ? fmt17(*cfg.envelope) : "";
        for (std::size_t i = 0; i < trials.size(); ++i)
            for (const auto& arm : trials[i])
                for (count_t t = cfg.sched.n0; t <= cfg.sched.n; ++t) {
                    auto ti = static_cast<std::size_t>(t - 1);
                    csv << i << ',' << arm.arm << ',' << t << ','
                        << arm.counts[ti] << ','
                        << fmt17(arm.curves.snapshot[ti]) << ','
                        << fmt17(arm.curves.distributional[ti]) << ','
                        << envelope << '\n';
                }
        write_text_file(cfg.out, csv.str());
    }

    if (keep_responses) {
        std::ostringstream csv;
        csv << "trial,arm,round,index,response\n";
        for (std::size_t i = 0; i < trials.size(); ++i)
            for (const auto& arm : trials[i])
                for (std::size_t t = 0; t < arm.responses.size(); ++t)
                    for (std::size_t j = 0; j < arm.responses[t].size(); ++j)
                        csv << i << ',' << arm.arm << ',' << t + 1 << ',' << j
                            << ',' << fmt17(arm.responses[t][j]) << '\n';
        write_text_file(cfg.transcript_out, csv.str());
    }

    std::ostream& out = std::cout;
    out << "simulate: analyst=" << cfg.analyst << " domain="
        << cfg.dom.size << " n0=" << cfg.sched.n0 << " n=" << cfg.sched.n
        << " k=" << cfg.k << " b=" << cfg.b << " sigma=" << fmt6(cfg.sigma)
        << " clipped=" << (cfg.clipped ? "yes" : "no")
        << " trials=" << cfg.trials << " seed=" << cfg.seed << "\n";
    if (cfg.filter_rho)
        out << "privacy filter: target rho " << fmt6(*cfg.filter_rho) << "\n";
    if (cfg.envelope)
        out << "bound envelope: alpha' = " << fmt6(*cfg.envelope) << "\n";

    for (std::size_t i = 0; i < trials.size(); ++i) {
        for (const auto& arm : trials[i]) {
            out << "  trial " << i << " [" << arm.arm << "]: answered "
                << arm.answered << "/" << cfg.k << ", worst snapshot error "
                << fmt6(arm.worst_snap) << ", worst dist error "
                << fmt6(arm.worst_dist);
            if (attack)
                out << ", last response " << fmt6(arm.last_resp)
                    << ", last dist error " << fmt6(arm.last_dist_err);
            if (cfg.filter_rho && arm.arm == "gauss")
                out << ", spent rho " << fmt6(arm.spent_rho) << " / "
                    << fmt6(*cfg.filter_rho);
            if (arm.terminated)
                out << ", terminated after round "
                    << (arm.last_round > 0 ? std::to_string(arm.last_round)
                                           : std::string("(none answered)"));
            out << "\n";
        }
    }

    auto mean_of = [&](const char* arm_name, auto field) {
        double sum = 0.0;
        count_t cnt = 0;
        for (const auto& arms : trials)
            for (const auto& arm : arms)
                if (arm.arm == arm_name) {
                    sum += field(arm);
                    ++cnt;
                }
        return cnt > 0 ? sum / static_cast<double>(cnt) : 0.0;
    };
    double mean_snap =
        mean_of("gauss", [](const ArmResult& a) { return a.worst_snap; });
    double mean_dist =
        mean_of("gauss", [](const ArmResult& a) { return a.worst_dist; });
    out << "aggregate [gauss]: mean worst snapshot error " << fmt6(mean_snap)
        << ", mean worst dist error " << fmt6(mean_dist) << "\n";
    if (attack) {
        double gauss_final =
            mean_of("gauss", [](const ArmResult& a) { return a.last_dist_err; });
        double exact_final =
            mean_of("exact", [](const ArmResult& a) { return a.last_dist_err; });
        out << "aggregate attack: mean final dist error exact "
            << fmt6(exact_final) << ", gauss " << fmt6(gauss_final);
        if (gauss_final > 0.0)
            out << ", ratio " << fmt6(exact_final / gauss_final);
        out << "\n";
    }
    return 0;
}

}  // namespace adagrow::cli
