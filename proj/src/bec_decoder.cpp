#include "ldpc_lab/bec_decoder.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ldpc_lab/rng.hpp"

namespace ldpc_lab {

namespace {
constexpr std::uint64_t kChannelTag = 0x6265634368616e6cULL;  // "becChanl"
}

ErasurePattern sample_erasures(long n, double epsilon, std::uint64_t seed) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon outside [0,1]");
    ErasurePattern pat;
    pat.n = n;
    pat.epsilon = epsilon;
    pat.seed = seed;
    pat.erased.assign(n, 0);
    std::mt19937_64 rng(derive_seed(seed, kChannelTag));
    for (long i = 0; i < n; ++i) {
        if (uniform_unit(rng) < epsilon) {
            pat.erased[i] = 1;
            ++pat.count;
        }
    }
    return pat;
}

DecodeTrace bp_decode(const TannerGraph& g, const ErasurePattern& pat, long max_iters,
                      bool record_sections, long section_stride) {
    if (pat.n != g.n) throw std::invalid_argument("erasure pattern size does not match graph");
    if (section_stride < 1) throw std::invalid_argument("section stride must be >= 1");

    const int l = g.params.l;
    const long sections = g.params.num_sections();

    std::vector<std::uint8_t> unknown(pat.erased);
    std::vector<std::int32_t> unknown_count(g.num_checks, 0);
    std::vector<std::int32_t> residual(sections, 0);
    long total = 0;
    for (long v = 0; v < g.n; ++v) {
        if (!unknown[v]) continue;
        ++total;
        ++residual[v / g.params.M];
        for (int j = 0; j < l; ++j) ++unknown_count[g.adj[v * l + j]];
    }

    DecodeTrace trace;
    trace.final_residual = total;
    auto record = [&](long round) {
        trace.recorded_rounds.push_back(round);
        trace.residual_by_section.push_back(residual);
    };
    if (record_sections) record(0);

    // Only checks whose unknown count just reached 1 can fire next round.
    std::vector<std::int32_t> frontier;
    for (long c = 0; c < g.num_checks; ++c)
        if (unknown_count[c] == 1) frontier.push_back(static_cast<std::int32_t>(c));

    std::vector<std::int32_t> recover;
    std::vector<std::int32_t> next_frontier;
    std::vector<std::uint8_t> pending(g.n, 0);
    long round = 0;

    while (total > 0 && !frontier.empty()) {
        if (2 * (round + 1) > max_iters) {
            trace.truncated = true;
            break;
        }
        recover.clear();
        for (std::int32_t c : frontier) {
            if (unknown_count[c] != 1) continue;
            for (std::int32_t e = g.check_offset[c]; e < g.check_offset[c + 1]; ++e) {
                std::int32_t v = g.check_adj[e];
                if (unknown[v]) {
                    if (!pending[v]) {
                        pending[v] = 1;
                        recover.push_back(v);
                    }
                    break;
                }
            }
        }
        if (recover.empty()) break;
        ++round;
        next_frontier.clear();
        for (std::int32_t v : recover) {
            pending[v] = 0;
            unknown[v] = 0;
            --total;
            --residual[v / g.params.M];
            for (int j = 0; j < l; ++j) {
                std::int32_t c = g.adj[v * static_cast<long>(l) + j];
                if (--unknown_count[c] == 1) next_frontier.push_back(c);
            }
        }
        frontier.swap(next_frontier);
        if (record_sections && ((2 * round) % section_stride == 0 || total == 0))
            record(2 * round);
    }

    trace.iterations_used = 2 * round;
    trace.final_residual = total;
    trace.success = (total == 0);
    trace.final_erased = std::move(unknown);
    if (record_sections &&
        (trace.recorded_rounds.empty() || trace.recorded_rounds.back() != 2 * round))
        record(2 * round);
    return trace;
}

std::vector<double> section_profile(const DecodeTrace& trace, long round, long M) {
    auto it = std::find(trace.recorded_rounds.begin(), trace.recorded_rounds.end(), round);
    if (it == trace.recorded_rounds.end())
        throw std::invalid_argument("round " + std::to_string(round) +
                                    " was not recorded (recording off or stride skipped it)");
    const auto& counts = trace.residual_by_section[it - trace.recorded_rounds.begin()];
    std::vector<double> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        out[i] = static_cast<double>(counts[i]) / static_cast<double>(M);
    return out;
}

}  // namespace ldpc_lab
