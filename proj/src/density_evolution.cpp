#include "ldpc_lab/density_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ldpc_lab {

DEState de_init(const CoupledProtograph& proto) {
    DEState s;
    s.var_to_check.assign(proto.edges.size(), 1.0);
    s.check_to_var.assign(proto.edges.size(), 1.0);
    return s;
}

namespace {

// Exclusion products via forward/backward passes; no division, so exact
// zeros propagate cleanly.
void update_check_messages(const CoupledProtograph& proto, const std::vector<double>& x,
                           std::vector<double>& y, std::vector<double>& fwd,
                           std::vector<double>& bwd) {
    for (const auto& edges : proto.check_edges) {
        const std::size_t d = edges.size();
        fwd.resize(d);
        bwd.resize(d);
        double acc = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            fwd[j] = acc;
            acc *= 1.0 - x[edges[j]];
        }
        acc = 1.0;
        for (std::size_t j = d; j-- > 0;) {
            bwd[j] = acc;
            acc *= 1.0 - x[edges[j]];
        }
        for (std::size_t j = 0; j < d; ++j) y[edges[j]] = 1.0 - fwd[j] * bwd[j];
    }
}

void update_var_messages(const CoupledProtograph& proto, double epsilon,
                         const std::vector<double>& y, std::vector<double>& x,
                         std::vector<double>& fwd, std::vector<double>& bwd) {
    for (const auto& edges : proto.var_edges) {
        const std::size_t d = edges.size();
        fwd.resize(d);
        bwd.resize(d);
        double acc = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            fwd[j] = acc;
            acc *= y[edges[j]];
        }
        acc = 1.0;
        for (std::size_t j = d; j-- > 0;) {
            bwd[j] = acc;
            acc *= y[edges[j]];
        }
        for (std::size_t j = 0; j < d; ++j) x[edges[j]] = epsilon * fwd[j] * bwd[j];
    }
}

}  // namespace

DEState de_iterate(const CoupledProtograph& proto, double epsilon, const DEState& state) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon outside [0,1]");
    DEState next = state;
    std::vector<double> fwd, bwd;
    update_check_messages(proto, state.var_to_check, next.check_to_var, fwd, bwd);
    update_var_messages(proto, epsilon, next.check_to_var, next.var_to_check, fwd, bwd);
    return next;
}

DEOutcome de_converges(const CoupledProtograph& proto, double epsilon, const DESettings& settings) {
    if (settings.tol <= 0.0) throw std::invalid_argument("tol must be positive");
    std::vector<double> x(proto.edges.size(), 1.0);
    std::vector<double> y(proto.edges.size(), 1.0);
    std::vector<double> fwd, bwd;

    DEOutcome out;
    std::vector<double> prev(x);
    for (long it = 1; it <= settings.max_iters; ++it) {
        update_check_messages(proto, x, y, fwd, bwd);
        update_var_messages(proto, epsilon, y, x, fwd, bwd);
        double max_x = 0.0, max_delta = 0.0;
        for (std::size_t e = 0; e < x.size(); ++e) {
            max_x = std::max(max_x, x[e]);
            max_delta = std::max(max_delta, prev[e] - x[e]);
        }
        out.iterations = it;
        out.residual = max_x;
        if (max_x < settings.tol) {
            out.verdict = DEVerdict::decodes;
            return out;
        }
        // Stall means a fixed point: every edge has stopped moving, not
        // just the worst one (the worst edge idles while the wave travels).
        if (max_delta < settings.stall_tol) {
            out.verdict = DEVerdict::stuck;
            return out;
        }
        prev = x;
    }
    out.verdict = DEVerdict::undecided;
    return out;
}

DEOutcome de_converges_uncoupled(int l, int r, double epsilon, const DESettings& settings) {
    if (l < 3 || l % 2 == 0 || r % l != 0 || r / l < 2)
        throw std::invalid_argument("uncoupled ensemble needs odd l >= 3 and r = k*l, k >= 2");
    if (settings.tol <= 0.0) throw std::invalid_argument("tol must be positive");
    double x = epsilon;
    DEOutcome out;
    for (long it = 1; it <= settings.max_iters; ++it) {
        double next = epsilon * std::pow(1.0 - std::pow(1.0 - x, r - 1), l - 1);
        out.iterations = it;
        out.residual = next;
        if (next < settings.tol) {
            out.verdict = DEVerdict::decodes;
            return out;
        }
        if (x - next < settings.stall_tol) {
            out.verdict = DEVerdict::stuck;
            return out;
        }
        x = next;
    }
    out.verdict = DEVerdict::undecided;
    return out;
}

namespace {

template <typename Probe>
ThresholdResult bisect_threshold(Probe&& probe, double tol_bisect, const DESettings& settings) {
    if (tol_bisect <= 0.0) throw std::invalid_argument("tol_bisect must be positive");
    ThresholdResult res;
    res.tol_bisect = tol_bisect;
    res.de_settings = settings;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol_bisect) {
        double mid = 0.5 * (lo + hi);
        DEOutcome o = probe(mid);
        if (o.verdict == DEVerdict::undecided)
            throw std::runtime_error("DE probe undecided at epsilon=" + std::to_string(mid) +
                                     "; raise max_iters");
        if (o.verdict == DEVerdict::decodes)
            lo = mid;
        else
            hi = mid;
    }
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.epsilon_bp = 0.5 * (lo + hi);
    return res;
}

}  // namespace

ThresholdResult bp_threshold(const CoupledProtograph& proto, double tol_bisect,
                             const DESettings& settings) {
    return bisect_threshold(
        [&](double eps) { return de_converges(proto, eps, settings); }, tol_bisect, settings);
}

ThresholdResult bp_threshold_uncoupled(int l, int r, double tol_bisect,
                                       const DESettings& settings) {
    return bisect_threshold(
        [&](double eps) { return de_converges_uncoupled(l, r, eps, settings); }, tol_bisect,
        settings);
}

}  // namespace ldpc_lab
