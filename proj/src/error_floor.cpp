#include "ldpc_lab/error_floor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

#include "ldpc_lab/rng.hpp"

namespace ldpc_lab {

namespace {
constexpr std::uint64_t kExpurgateTag = 0x6578707572676174ULL;  // "expurgat"
constexpr std::uint64_t kCensusTag = 0x6e32737572766579ULL;     // "n2survey"

double choose2(int k) { return 0.5 * k * (k - 1); }
}  // namespace

double poisson_lambda(const EnsembleParams& params) {
    params.validate();
    return std::pow(static_cast<double>(params.k), params.l - 2) * choose2(params.k) *
           static_cast<double>(params.num_sections()) /
           std::pow(static_cast<double>(params.M), params.l - 2);
}

double clean_fraction(const EnsembleParams& params) { return std::exp(-poisson_lambda(params)); }

double expected_floor(const EnsembleParams& params, double epsilon) {
    params.validate();
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon outside [0,1]");
    return 2.0 * choose2(params.k) * std::pow(static_cast<double>(params.k), params.l - 2) *
           epsilon * epsilon / std::pow(static_cast<double>(params.M), params.l - 1);
}

namespace {

// Sorted neighbor set of a variable, small enough to keep on the stack.
std::vector<std::int32_t> neighbor_key(const TannerGraph& g, long v) {
    const int l = g.params.l;
    std::vector<std::int32_t> key(g.adj.begin() + v * l, g.adj.begin() + (v + 1) * l);
    std::sort(key.begin(), key.end());
    return key;
}

struct KeyHash {
    std::size_t operator()(const std::vector<std::int32_t>& key) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::int32_t c : key) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
        return static_cast<std::size_t>(h);
    }
};

void collect_pairs(std::unordered_map<std::vector<std::int32_t>, std::vector<long>, KeyHash>& groups,
                   Weight2Census& census) {
    for (auto& [key, vars] : groups) {
        for (std::size_t a = 0; a < vars.size(); ++a)
            for (std::size_t b = a + 1; b < vars.size(); ++b)
                census.pairs.emplace_back(vars[a], vars[b]);
    }
}

}  // namespace

Weight2Census count_weight2(const TannerGraph& g) {
    Weight2Census census;
    const long M = g.params.M;
    std::unordered_map<std::vector<std::int32_t>, std::vector<long>, KeyHash> groups;
    for (long s = 0; s < g.params.num_sections(); ++s) {
        groups.clear();
        for (long v = s * M; v < (s + 1) * M; ++v) groups[neighbor_key(g, v)].push_back(v);
        collect_pairs(groups, census);
    }
    std::sort(census.pairs.begin(), census.pairs.end());
    census.count = static_cast<long>(census.pairs.size());
    return census;
}

Weight2Census count_weight2_allpairs(const TannerGraph& g) {
    Weight2Census census;
    std::unordered_map<std::vector<std::int32_t>, std::vector<long>, KeyHash> groups;
    for (long v = 0; v < g.n; ++v) groups[neighbor_key(g, v)].push_back(v);
    collect_pairs(groups, census);
    std::sort(census.pairs.begin(), census.pairs.end());
    census.count = static_cast<long>(census.pairs.size());
    return census;
}

N2Distribution empirical_n2_distribution(const EnsembleParams& params, long num_samples,
                                         std::uint64_t seed) {
    if (num_samples < 100) throw std::invalid_argument("need at least 100 samples");
    const CoupledProtograph proto = build_coupled_protograph(params);

    N2Distribution dist;
    dist.samples = num_samples;
    dist.lambda = poisson_lambda(params);

    std::vector<long> counts;
    counts.reserve(num_samples);
    long max_n2 = 0;
    double sum = 0.0;
    for (long i = 0; i < num_samples; ++i) {
        TannerGraph g =
            lift(proto, params, derive_seed(seed, kCensusTag, static_cast<std::uint64_t>(i)));
        long n2 = count_weight2(g).count;
        counts.push_back(n2);
        max_n2 = std::max(max_n2, n2);
        sum += static_cast<double>(n2);
    }
    dist.mean = sum / static_cast<double>(num_samples);

    dist.histogram.assign(max_n2 + 1, 0);
    for (long n2 : counts) ++dist.histogram[n2];
    dist.clean_fraction_empirical =
        static_cast<double>(dist.histogram[0]) / static_cast<double>(num_samples);

    dist.empirical_pmf.resize(dist.histogram.size());
    dist.poisson_pmf.resize(dist.histogram.size());
    double log_lambda = dist.lambda > 0.0 ? std::log(dist.lambda) : 0.0;
    for (std::size_t j = 0; j < dist.histogram.size(); ++j) {
        dist.empirical_pmf[j] =
            static_cast<double>(dist.histogram[j]) / static_cast<double>(num_samples);
        double log_pmf = -dist.lambda + static_cast<double>(j) * log_lambda -
                         std::lgamma(static_cast<double>(j) + 1.0);
        dist.poisson_pmf[j] = dist.lambda > 0.0 ? std::exp(log_pmf) : (j == 0 ? 1.0 : 0.0);
    }

    // Chi-square with tail mass folded into the last bin and low-expectation
    // bins merged from the right until every expected count is >= 5.
    std::vector<double> expected(dist.poisson_pmf.size());
    double tail = 1.0;
    for (std::size_t j = 0; j < expected.size(); ++j) {
        expected[j] = dist.poisson_pmf[j] * static_cast<double>(num_samples);
        tail -= dist.poisson_pmf[j];
    }
    expected.back() += std::max(0.0, tail) * static_cast<double>(num_samples);
    std::vector<double> observed(dist.histogram.begin(), dist.histogram.end());

    while (expected.size() > 1 && expected.back() < 5.0) {
        expected[expected.size() - 2] += expected.back();
        observed[observed.size() - 2] += observed.back();
        expected.pop_back();
        observed.pop_back();
    }
    while (expected.size() > 1 && expected.front() < 5.0) {
        expected[1] += expected[0];
        observed[1] += observed[0];
        expected.erase(expected.begin());
        observed.erase(observed.begin());
    }

    dist.chi2 = 0.0;
    for (std::size_t j = 0; j < expected.size(); ++j) {
        double diff = observed[j] - expected[j];
        dist.chi2 += diff * diff / expected[j];
    }
    dist.dof = static_cast<int>(expected.size()) - 1;
    dist.p_value = dist.dof > 0 ? boost::math::gamma_q(0.5 * dist.dof, 0.5 * dist.chi2) : 1.0;
    return dist;
}

ExpurgateResult expurgate(const EnsembleParams& params, std::uint64_t seed, int max_attempts) {
    if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
    const CoupledProtograph proto = build_coupled_protograph(params);
    ExpurgateResult res;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        TannerGraph g = lift(proto, params,
                             derive_seed(seed, kExpurgateTag, static_cast<std::uint64_t>(attempt)));
        res.attempts = attempt + 1;
        if (count_weight2(g).count == 0) {
            res.observed_clean_fraction = 1.0 / static_cast<double>(res.attempts);
            res.graph = std::move(g);
            return res;
        }
    }
    res.observed_clean_fraction = 0.0;
    return res;
}

}  // namespace ldpc_lab
