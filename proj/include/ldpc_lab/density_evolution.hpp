#pragma once

#include <vector>

#include "ldpc_lab/ensemble_graph.hpp"
#include "ldpc_lab/params.hpp"

namespace ldpc_lab {

// Per-directed-edge erasure probabilities on the protograph.
struct DEState {
    std::vector<double> var_to_check;  // x, indexed by protograph edge id
    std::vector<double> check_to_var;  // y, same indexing
};

DEState de_init(const CoupledProtograph& proto);

// One parallel round: all check-to-variable updates from the current x,
// then all variable-to-check updates at channel parameter epsilon.
DEState de_iterate(const CoupledProtograph& proto, double epsilon, const DEState& state);

enum class DEVerdict { decodes, stuck, undecided };

struct DEOutcome {
    DEVerdict verdict = DEVerdict::undecided;
    double residual = 0.0;  // max edge erasure probability at exit
    long iterations = 0;
};

struct DESettings {
    double tol = 1e-10;          // residual below this counts as decoded
    double stall_tol = 1e-12;    // per-iteration change below this is a fixed point
    long max_iters = 1000000;
};

DEOutcome de_converges(const CoupledProtograph& proto, double epsilon,
                       const DESettings& settings = {});

// Scalar recursion x = eps * (1 - (1-x)^(r-1))^(l-1) for the uncoupled
// (l, r) ensemble, same verdict semantics.
DEOutcome de_converges_uncoupled(int l, int r, double epsilon, const DESettings& settings = {});

struct ThresholdResult {
    double epsilon_bp = 0.0;
    double bracket_lo = 0.0;  // decodes
    double bracket_hi = 1.0;  // does not decode
    double tol_bisect = 1e-4;
    DESettings de_settings;
};

// Bisection on epsilon; throws on an undecided DE probe.
ThresholdResult bp_threshold(const CoupledProtograph& proto, double tol_bisect = 1e-4,
                             const DESettings& settings = {});
ThresholdResult bp_threshold_uncoupled(int l, int r, double tol_bisect = 1e-4,
                                       const DESettings& settings = {});

// Paper-quoted reference constants for the (3,6) underlying ensemble.
inline constexpr double kEpsilonBp36 = 0.4294;
inline constexpr double kEpsilonMap36 = 0.4815;

}  // namespace ldpc_lab
