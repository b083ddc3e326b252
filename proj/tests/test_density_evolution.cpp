#include <doctest.h>

#include <cmath>

#include "ldpc_lab/density_evolution.hpp"

using namespace ldpc_lab;

namespace {

// Uncoupled (l, r) template as a raw protograph: k variable types, one
// check type, parallel edges allowed (the DE recursion does not care).
CoupledProtograph uncoupled_proto(int l, int k) {
    CoupledProtograph proto;
    proto.num_var_types = k;
    proto.num_check_types = 1;
    for (int t = 0; t < k; ++t)
        for (int j = 0; j < l; ++j) proto.edges.push_back({t, 0});
    proto.build_adjacency();
    return proto;
}

double scalar_step(double x, double eps, int l, int r) {
    return eps * std::pow(1.0 - std::pow(1.0 - x, r - 1), l - 1);
}

}  // namespace

TEST_CASE("epsilon 0 zeroes the state in one round") {
    auto proto = build_coupled_protograph({3, 2, 3, 2});
    auto s = de_iterate(proto, 0.0, de_init(proto));
    for (double v : s.var_to_check) CHECK(v == 0.0);
}

TEST_CASE("epsilon 1 is a fixed point of the uncoupled recursion") {
    auto proto = uncoupled_proto(3, 2);
    auto s = de_iterate(proto, 1.0, de_init(proto));
    for (double v : s.var_to_check) CHECK(v == 1.0);
}

TEST_CASE("uncoupled (3,6) at eps=0.42 decreases monotonically to zero") {
    auto proto = uncoupled_proto(3, 2);
    auto s = de_init(proto);
    double prev = 1.0;
    for (int it = 0; it < 200; ++it) {
        s = de_iterate(proto, 0.42, s);
        double mx = 0.0;
        for (double v : s.var_to_check) mx = std::max(mx, v);
        CHECK(mx <= prev);
        prev = mx;
    }
    CHECK(prev < 1e-6);

    auto out = de_converges_uncoupled(3, 6, 0.42);
    CHECK(out.verdict == DEVerdict::decodes);
}

TEST_CASE("protograph DE on the uncoupled template matches the scalar recursion") {
    auto proto = uncoupled_proto(3, 2);
    const double eps = 0.41;
    auto s = de_init(proto);
    double x = 1.0;
    for (int it = 0; it < 50; ++it) {
        s = de_iterate(proto, eps, s);
        x = scalar_step(x, eps, 3, 6);
        for (double v : s.var_to_check) CHECK(v == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("coupled (3,6,L=20) verdicts bracket the known constants") {
    auto proto = build_coupled_protograph({3, 2, 20, 2});
    CHECK(de_converges(proto, 0.40).verdict == DEVerdict::decodes);
    CHECK(de_converges(proto, 0.49).verdict == DEVerdict::stuck);
    CHECK(de_converges(proto, 0.0).iterations == 1);
}

TEST_CASE("DE monotone in iteration and symmetric under reflection") {
    EnsembleParams p{3, 2, 8, 2};
    auto proto = build_coupled_protograph(p);
    auto s = de_init(proto);
    const double eps = 0.46;
    const int l = p.l;
    for (int it = 0; it < 120; ++it) {
        auto next = de_iterate(proto, eps, s);
        for (std::size_t e = 0; e < s.var_to_check.size(); ++e)
            CHECK(next.var_to_check[e] <= s.var_to_check[e] + 1e-15);
        s = next;

        // Reflection i -> -i maps variable type (s,t) to (2L-s, t) and
        // window slot w to l-1-w.
        const long sections = p.num_sections();
        for (long sec = 0; sec < sections; ++sec) {
            for (int t = 0; t < p.k; ++t) {
                for (int w = 0; w < l; ++w) {
                    std::size_t e = (sec * p.k + t) * l + w;
                    std::size_t m = ((sections - 1 - sec) * p.k + t) * l + (l - 1 - w);
                    CHECK(s.var_to_check[e] == doctest::Approx(s.var_to_check[m]).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("DE decodability is monotone in epsilon") {
    auto proto = build_coupled_protograph({3, 2, 10, 2});
    bool seen_stuck = false;
    for (double eps : {0.1, 0.2, 0.3, 0.4, 0.45, 0.47, 0.49, 0.6, 0.8}) {
        auto out = de_converges(proto, eps);
        if (out.verdict == DEVerdict::stuck) seen_stuck = true;
        if (seen_stuck) CHECK(out.verdict == DEVerdict::stuck);
    }
    CHECK(seen_stuck);
}

TEST_CASE("uncoupled (3,6) threshold is 0.4294 within 1e-3") {
    auto res = bp_threshold_uncoupled(3, 6, 1e-4);
    CHECK(res.bracket_hi - res.bracket_lo <= 1e-4);
    CHECK(std::abs(res.epsilon_bp - kEpsilonBp36) < 1e-3);
}

TEST_CASE("even variable degree is rejected") {
    CHECK_THROWS_AS(de_converges_uncoupled(2, 4, 0.3), std::invalid_argument);
    CHECK_THROWS_AS((build_coupled_protograph({2, 2, 4, 2})), std::invalid_argument);
}

TEST_CASE("coupled threshold dominates uncoupled and is non-increasing in L") {
    auto base = bp_threshold_uncoupled(3, 6, 1e-3);
    double prev = 1.0;
    for (long L : {1L, 5L, 20L}) {
        auto proto = build_coupled_protograph({3, 2, L, 2});
        auto res = bp_threshold(proto, 1e-3);
        CHECK(res.epsilon_bp >= base.epsilon_bp - 1e-3);
        CHECK(res.epsilon_bp <= prev + 1e-3);
        prev = res.epsilon_bp;
    }
}

TEST_CASE("coupled (3,6,L=100) threshold anchor: 0.4878") {
    auto res = bp_threshold(build_coupled_protograph({3, 2, 100, 2}), 1e-3);
    CHECK(res.epsilon_bp == doctest::Approx(0.4878).epsilon(0.005));
}
