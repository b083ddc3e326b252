#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ldpc_lab/montecarlo.hpp"
#include "ldpc_lab/rng.hpp"

using namespace ldpc_lab;

TEST_CASE("config validation") {
    SimConfig cfg;
    cfg.params = {3, 2, 3, 8};
    cfg.epsilons = {0.3};
    CHECK_NOTHROW(cfg.validate());

    SimConfig bad = cfg;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.delta = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.epsilons = {1.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.epsilons.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("epsilon 0 grid point is exactly clean") {
    SimConfig cfg;
    cfg.params = {3, 2, 3, 16};
    cfg.epsilons = {0.0};
    cfg.trials = 50;
    auto stats = run_sweep(cfg);
    REQUIRE(stats.per_epsilon.size() == 1);
    CHECK(stats.per_epsilon[0].Pb == 0.0);
    CHECK(stats.per_epsilon[0].PB == 0.0);
    CHECK(stats.per_epsilon[0].iter_dist.phi[0] == doctest::Approx(1.0));
    CHECK(stats.per_epsilon[0].ell_min == 0);
}

TEST_CASE("iteration distribution and min_iterations") {
    std::vector<TrialRecord> recs;
    auto add = [&](bool ok, long iters) {
        TrialRecord r;
        r.epsilon = 0.4;
        r.success = ok;
        r.iterations_used = iters;
        recs.push_back(r);
    };
    for (int i = 0; i < 6; ++i) add(true, 3);
    for (int i = 0; i < 3; ++i) add(true, 7);
    add(false, 0);

    auto dist = iteration_distribution(recs);
    CHECK(dist.phi[3] == doctest::Approx(0.6));
    CHECK(dist.phi[7] == doctest::Approx(0.3));
    CHECK(dist.Phi.back() == doctest::Approx(0.9));  // 1 - P_B

    CHECK(min_iterations(dist, 0.5) == 3);
    CHECK(min_iterations(dist, 0.85) == 7);
    CHECK(!min_iterations(dist, 0.99).has_value());  // unreachable

    CHECK_THROWS_AS(iteration_distribution({}), std::invalid_argument);
    CHECK_THROWS_AS(min_iterations(dist, 0.0), std::invalid_argument);
}

TEST_CASE("degenerate distribution: all successes at round 0") {
    std::vector<TrialRecord> recs(4);
    for (auto& r : recs) r.success = true;
    auto dist = iteration_distribution(recs);
    CHECK(dist.phi[0] == 1.0);
}

TEST_CASE("ell_min at (3,6,L=20,M=1024), eps=0.44, delta=0.9 reaches 100") {
    SimConfig cfg;
    cfg.params = {3, 2, 20, 1024};
    cfg.epsilons = {0.44};
    cfg.trials = 100;
    cfg.master_seed = 440;
    cfg.delta = 0.9;
    auto stats = run_sweep(cfg);
    REQUIRE(stats.per_epsilon[0].ell_min.has_value());
    CHECK(*stats.per_epsilon[0].ell_min >= 100);
    CHECK(*stats.per_epsilon[0].ell_min <= 200);
}

TEST_CASE("estimator sanity on synthetic Bernoulli records") {
    const double p_fail = 0.3;
    const long N = 10000;
    std::mt19937_64 rng(11);
    std::vector<TrialRecord> recs;
    long failures = 0;
    for (long i = 0; i < N; ++i) {
        TrialRecord r;
        r.epsilon = 0.4;
        r.trial_index = i;
        r.success = uniform_unit(rng) >= p_fail;
        r.iterations_used = r.success ? 10 : 0;
        r.residual = r.success ? 0 : 50;
        if (!r.success) ++failures;
        recs.push_back(r);
    }
    auto stats = aggregate_epsilon(recs, 1000, 0.5, 123);
    double sigma = std::sqrt(p_fail * (1 - p_fail) / N);
    CHECK(std::abs(stats.PB - p_fail) < 3 * sigma);
    CHECK(stats.Pb == doctest::Approx(static_cast<double>(failures) * 50 / (N * 1000.0)));
    CHECK(stats.Pb_ci > 0.0);

    // Accounting identity on the sample.
    CHECK(stats.iter_dist.Phi.back() + stats.PB == doctest::Approx(1.0));

    // Reordering trials must not change the aggregate.
    auto shuffled = recs;
    fisher_yates(shuffled, rng);
    auto stats2 = aggregate_epsilon(shuffled, 1000, 0.5, 123);
    CHECK(stats2.PB == stats.PB);
    CHECK(stats2.Pb == stats.Pb);
}

TEST_CASE("sweep is deterministic and worker-count independent") {
    SimConfig cfg;
    cfg.params = {3, 2, 5, 32};
    cfg.epsilons = {0.35, 0.45};
    cfg.trials = 200;
    cfg.code_samples = 2;
    cfg.master_seed = 77;
    cfg.workers = 1;
    auto a = run_sweep(cfg);
    cfg.workers = 4;
    auto b = run_sweep(cfg);
    cfg.workers = 3;
    auto c = run_sweep(cfg);

    CHECK(results_csv(a) == results_csv(b));
    CHECK(results_csv(a) == results_csv(c));
    CHECK(iterdist_csv(a) == iterdist_csv(b));

    cfg.master_seed = 78;
    auto d = run_sweep(cfg);
    CHECK(results_csv(a) != results_csv(d));
}

TEST_CASE("early stop rule is deterministic too") {
    SimConfig cfg;
    cfg.params = {3, 2, 5, 32};
    cfg.epsilons = {0.48};
    cfg.trials = 5000;
    cfg.master_seed = 5;
    cfg.stop_after_failures = 100;
    cfg.workers = 1;
    auto a = run_sweep(cfg);
    cfg.workers = 4;
    auto b = run_sweep(cfg);
    CHECK(results_csv(a) == results_csv(b));
    CHECK(a.per_epsilon[0].trials < cfg.trials);  // stopped early at this eps
}

TEST_CASE("P_b <= P_B pointwise and Pb/PB sane on a mixed grid") {
    SimConfig cfg;
    cfg.params = {3, 2, 5, 64};
    cfg.epsilons = {0.30, 0.48};
    cfg.trials = 100;
    cfg.master_seed = 9;
    auto stats = run_sweep(cfg);
    for (const auto& s : stats.per_epsilon) {
        CHECK(s.Pb <= s.PB + 1e-12);
        CHECK(s.PB >= 0.0);
        CHECK(s.PB <= 1.0);
    }
    // Decodability degrades with epsilon.
    CHECK(stats.per_epsilon[0].PB <= stats.per_epsilon[1].PB);
}

TEST_CASE("scaling rules evaluate and guard overflow") {
    ScalingRule r;
    r.kind = ScalingRule::Kind::constant;
    r.L0 = 100;
    CHECK(r.eval(64) == 100);

    r.kind = ScalingRule::Kind::linear;
    r.c = 0.5;
    CHECK(r.eval(128) == 64);

    r.kind = ScalingRule::Kind::polynomial;
    r.c = 0.5;
    r.p = 2.0;
    CHECK(r.eval(64) == 1024);

    r.kind = ScalingRule::Kind::exponential;
    r.a = 1.0;
    r.b = 2.0;
    r.m_offset = 0;
    CHECK(r.eval(4) == 16);
    CHECK_THROWS_AS(r.eval(128), std::runtime_error);  // cap
}

TEST_CASE("scaling experiment delegates per point") {
    ScalingRule rule;
    rule.kind = ScalingRule::Kind::linear;
    rule.c = 0.5;
    EnsembleParams base{3, 2, 1, 2};
    auto pts = scaling_experiment(rule, {8, 16}, base, {0.3}, 20, 42);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].L == 4);
    CHECK(pts[1].L == 8);
    CHECK(pts[0].stats.params.M == 8);
    CHECK(pts[1].stats.params.L == 8);
}
