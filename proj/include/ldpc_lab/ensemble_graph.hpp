#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ldpc_lab/params.hpp"

namespace ldpc_lab {

// One protograph edge bundle. Indices are 0-based contiguous remappings of
// the chain positions: variable type vt at section s = vt / k, check type
// ct at check position ct (position 0 is the leftmost terminating check).
struct ProtoEdge {
    int var_type;
    int check_type;
};

struct CoupledProtograph {
    int num_var_types = 0;    // (2L+1) * k
    int num_check_types = 0;  // 2(L + lhat) + 1
    std::vector<ProtoEdge> edges;
    std::vector<std::vector<int>> var_edges;    // edge ids per variable type
    std::vector<std::vector<int>> check_edges;  // edge ids per check type

    void build_adjacency();
    int check_degree(int check_type) const { return static_cast<int>(check_edges[check_type].size()); }
};

// Chain of 2L+1 sections with k variable types each; every variable type
// connects to the lhat check positions on each side plus its own, and the
// chain is terminated with lhat extra checks per side.
CoupledProtograph build_coupled_protograph(const EnsembleParams& params);

// A lifted code sample. Variable v lives in section v / M; check c sits at
// chain position c / (M/k). adj holds, per variable, its l check indices in
// window order (leftmost position first).
struct TannerGraph {
    EnsembleParams params;
    std::uint64_t seed = 0;
    long n = 0;
    long num_checks = 0;
    std::vector<std::int32_t> adj;  // n * l

    // CSR over checks, built once; decoders iterate it read-only.
    std::vector<std::int32_t> check_offset;
    std::vector<std::int32_t> check_adj;

    long section_of_var(long v) const { return v / params.M; }
    long pos_of_check(long c) const { return c / params.copies(); }
    int check_degree(long c) const { return check_offset[c + 1] - check_offset[c]; }

    void build_check_adjacency();
};

// Expand each protograph edge into M/k concrete edges through a uniform
// permutation drawn from a substream keyed by (seed, bundle id).
TannerGraph lift(const CoupledProtograph& proto, const EnsembleParams& params, std::uint64_t seed);

// Convenience: protograph construction + lift in one call.
TannerGraph sample_code(const EnsembleParams& params, std::uint64_t seed);

// Machine-readable invariant violations; empty means valid.
std::vector<std::string> validate_graph(const TannerGraph& g, const EnsembleParams& params);

// Degree of every check copy at a given chain position (0-based).
int expected_check_degree(const EnsembleParams& params, long check_pos);

// Plain-text round-trip: "l k L M seed" header, then one line per variable.
void save_graph(const TannerGraph& g, std::ostream& os);
TannerGraph load_graph(std::istream& is);

}  // namespace ldpc_lab
