#include "ldpc_lab/ensemble_graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "ldpc_lab/rng.hpp"

namespace ldpc_lab {

namespace {
constexpr std::uint64_t kBundleTag = 0x6c69667442756e64ULL;  // "liftBund"
}

void CoupledProtograph::build_adjacency() {
    var_edges.assign(num_var_types, {});
    check_edges.assign(num_check_types, {});
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        var_edges[edges[e].var_type].push_back(e);
        check_edges[edges[e].check_type].push_back(e);
    }
}

CoupledProtograph build_coupled_protograph(const EnsembleParams& params) {
    params.validate();
    const int lhat = params.lhat();
    const long sections = params.num_sections();

    CoupledProtograph proto;
    proto.num_var_types = static_cast<int>(sections * params.k);
    proto.num_check_types = static_cast<int>(params.num_check_positions());
    proto.edges.reserve(static_cast<std::size_t>(sections) * params.r());

    // Edge order fixes the bundle ids: section, then type, then window offset.
    for (long s = 0; s < sections; ++s) {
        for (int t = 0; t < params.k; ++t) {
            int vt = static_cast<int>(s * params.k + t);
            for (int w = 0; w <= 2 * lhat; ++w) {
                proto.edges.push_back({vt, static_cast<int>(s + w)});
            }
        }
    }
    proto.build_adjacency();
    return proto;
}

void TannerGraph::build_check_adjacency() {
    check_offset.assign(num_checks + 1, 0);
    for (std::int32_t c : adj) ++check_offset[c + 1];
    for (long c = 0; c < num_checks; ++c) check_offset[c + 1] += check_offset[c];
    check_adj.resize(adj.size());
    std::vector<std::int32_t> fill(check_offset.begin(), check_offset.end() - 1);
    const int l = params.l;
    for (long v = 0; v < n; ++v)
        for (int j = 0; j < l; ++j) check_adj[fill[adj[v * l + j]]++] = static_cast<std::int32_t>(v);
}

TannerGraph lift(const CoupledProtograph& proto, const EnsembleParams& params, std::uint64_t seed) {
    params.validate();
    const long copies = params.copies();
    const int l = params.l;
    const int k = params.k;
    const long M = params.M;

    TannerGraph g;
    g.params = params;
    g.seed = seed;
    g.n = params.num_variables();
    g.num_checks = params.num_checks();
    g.adj.resize(static_cast<std::size_t>(g.n) * l);

    for (int e = 0; e < static_cast<int>(proto.edges.size()); ++e) {
        const auto [vt, ct] = proto.edges[e];
        const long s = vt / k;
        const int t = vt % k;
        const int w = e % l;  // window slot, by edge enumeration order
        const long var_base = s * M + static_cast<long>(t) * copies;
        const long check_base = static_cast<long>(ct) * copies;

        std::mt19937_64 rng(derive_seed(seed, kBundleTag, static_cast<std::uint64_t>(e)));
        auto perm = random_permutation(static_cast<std::size_t>(copies), rng);
        for (long c = 0; c < copies; ++c)
            g.adj[(var_base + c) * l + w] = static_cast<std::int32_t>(check_base + perm[c]);
    }
    g.build_check_adjacency();
    return g;
}

TannerGraph sample_code(const EnsembleParams& params, std::uint64_t seed) {
    return lift(build_coupled_protograph(params), params, seed);
}

int expected_check_degree(const EnsembleParams& params, long check_pos) {
    // Sections whose window covers this position.
    const long lo = std::max<long>(0, check_pos - 2 * params.lhat());
    const long hi = std::min<long>(params.num_sections() - 1, check_pos);
    return static_cast<int>(params.k * (hi - lo + 1));
}

std::vector<std::string> validate_graph(const TannerGraph& g, const EnsembleParams& params) {
    std::vector<std::string> out;
    const int l = params.l;
    const long copies = params.copies();

    if (g.n != params.num_variables() || static_cast<long>(g.adj.size()) != g.n * l) {
        out.push_back("variable count mismatch");
        return out;
    }
    if (g.num_checks != params.num_checks()) out.push_back("check count mismatch");

    for (long v = 0; v < g.n; ++v) {
        const long s = v / params.M;
        for (int j = 0; j < l; ++j) {
            const std::int32_t c = g.adj[v * l + j];
            if (c < 0 || c >= g.num_checks) {
                out.push_back("check index out of range at variable " + std::to_string(v));
                continue;
            }
            const long pos = c / copies;
            if (pos < s || pos > s + 2 * params.lhat())
                out.push_back("edge position out of window at variable " + std::to_string(v));
        }
        for (int a = 0; a < l; ++a)
            for (int b = a + 1; b < l; ++b)
                if (g.adj[v * l + a] == g.adj[v * l + b])
                    out.push_back("parallel edge at variable " + std::to_string(v));
    }

    // Per-bundle bijection from variable copies to check copies.
    std::vector<char> seen(static_cast<std::size_t>(copies));
    for (long s = 0; s < params.num_sections(); ++s) {
        for (int t = 0; t < params.k; ++t) {
            const long var_base = s * params.M + static_cast<long>(t) * copies;
            for (int w = 0; w < l; ++w) {
                std::fill(seen.begin(), seen.end(), 0);
                bool ok = true;
                const long check_base = (s + w) * copies;
                for (long c = 0; c < copies && ok; ++c) {
                    const long target = g.adj[(var_base + c) * l + w] - check_base;
                    if (target < 0 || target >= copies || seen[target]) ok = false;
                    else seen[target] = 1;
                }
                if (!ok)
                    out.push_back("bundle permutation not a bijection at section " +
                                  std::to_string(s) + " type " + std::to_string(t) + " slot " +
                                  std::to_string(w));
            }
        }
    }
    return out;
}

void save_graph(const TannerGraph& g, std::ostream& os) {
    os << g.params.l << ' ' << g.params.k << ' ' << g.params.L << ' ' << g.params.M << ' '
       << g.seed << '\n';
    const int l = g.params.l;
    for (long v = 0; v < g.n; ++v) {
        for (int j = 0; j < l; ++j) {
            if (j) os << ' ';
            os << g.adj[v * l + j];
        }
        os << '\n';
    }
}

TannerGraph load_graph(std::istream& is) {
    TannerGraph g;
    if (!(is >> g.params.l >> g.params.k >> g.params.L >> g.params.M >> g.seed))
        throw std::runtime_error("graph file: bad header");
    g.params.validate();
    g.n = g.params.num_variables();
    g.num_checks = g.params.num_checks();
    g.adj.resize(static_cast<std::size_t>(g.n) * g.params.l);
    for (auto& entry : g.adj)
        if (!(is >> entry)) throw std::runtime_error("graph file: truncated adjacency");
    auto violations = validate_graph(g, g.params);
    if (!violations.empty()) throw std::runtime_error("graph file: " + violations.front());
    g.build_check_adjacency();
    return g;
}

}  // namespace ldpc_lab
