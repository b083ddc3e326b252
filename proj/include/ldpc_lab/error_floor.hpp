#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ldpc_lab/ensemble_graph.hpp"
#include "ldpc_lab/params.hpp"

namespace ldpc_lab {

// Expected weight-2 codeword count lambda = k^(l-2) * C(k,2) * (2L+1) / M^(l-2).
double poisson_lambda(const EnsembleParams& params);

// exp(-lambda): limiting fraction of codes with no weight-2 codeword.
double clean_fraction(const EnsembleParams& params);

// Ensemble-average error floor 2 * C(k,2) * k^(l-2) * eps^2 / M^(l-1),
// valid well below the BP threshold.
double expected_floor(const EnsembleParams& params, double epsilon);

struct Weight2Census {
    long count = 0;
    std::vector<std::pair<long, long>> pairs;  // variable index pairs, first < second
};

// Weight-2 codewords are pairs of variables sharing the same l checks; over
// the BEC these coincide with weight-2 stopping sets. Same-section scan.
Weight2Census count_weight2(const TannerGraph& g);

// Independent all-pairs route keyed by hashed neighbor sets; would also
// catch cross-section pairs if the construction ever allowed them.
Weight2Census count_weight2_allpairs(const TannerGraph& g);

struct N2Distribution {
    long samples = 0;
    double lambda = 0.0;
    std::vector<long> histogram;       // counts per N2 value
    std::vector<double> empirical_pmf;
    std::vector<double> poisson_pmf;
    double mean = 0.0;
    double clean_fraction_empirical = 0.0;  // P(N2 = 0)
    double chi2 = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Samples num_samples codes, censuses each, and tests the histogram against
// Pois(lambda) with tail bins merged until the expected count reaches 5.
N2Distribution empirical_n2_distribution(const EnsembleParams& params, long num_samples,
                                         std::uint64_t seed);

struct ExpurgateResult {
    std::optional<TannerGraph> graph;  // empty when max_attempts ran out
    int attempts = 0;
    double observed_clean_fraction = 0.0;
};

// Resample fresh lifts until one has no weight-2 codeword.
ExpurgateResult expurgate(const EnsembleParams& params, std::uint64_t seed, int max_attempts);

}  // namespace ldpc_lab
