#pragma once

#include <cstdint>
#include <vector>

#include "ldpc_lab/ensemble_graph.hpp"

namespace ldpc_lab {

struct ErasurePattern {
    long n = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::uint8_t> erased;  // size n
    long count = 0;
};

// Each index erased independently with probability epsilon.
ErasurePattern sample_erasures(long n, double epsilon, std::uint64_t seed);

// Iteration counts are in message-pass units: one iteration is a single
// update pass (check side or variable side), so a full flooding round costs
// two. This matches the scale on which iteration distributions are usually
// plotted for these chains.
struct DecodeTrace {
    long iterations_used = 0;  // 2 x flooding rounds that recovered a variable
    bool success = false;
    bool truncated = false;  // max_iters hit before the fixed point
    long final_residual = 0;
    std::vector<std::uint8_t> final_erased;  // unresolved variables at the fixed point
    // Recorded rounds in the same units (round 0 is the raw channel state,
    // labels advance by two per flooding round) and the matching
    // per-section residual counts; empty unless recording was on.
    std::vector<long> recorded_rounds;
    std::vector<std::vector<std::int32_t>> residual_by_section;
};

// Flooding BP over the BEC: per round, every check with exactly one unknown
// neighbor (as of the round start) resolves it. Runs to the recovery fixed
// point or max_iters.
DecodeTrace bp_decode(const TannerGraph& g, const ErasurePattern& pat, long max_iters,
                      bool record_sections = false, long section_stride = 1);

// Residual fraction (count / M) per section at a recorded round.
std::vector<double> section_profile(const DecodeTrace& trace, long round, long M);

}  // namespace ldpc_lab
