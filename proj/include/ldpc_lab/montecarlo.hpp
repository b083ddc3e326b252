#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldpc_lab/bec_decoder.hpp"
#include "ldpc_lab/ensemble_graph.hpp"
#include "ldpc_lab/params.hpp"

namespace ldpc_lab {

struct SimConfig {
    EnsembleParams params;
    std::vector<double> epsilons;
    long trials = 100000;       // per (code, epsilon)
    int code_samples = 1;
    std::uint64_t master_seed = 1;
    long max_iters = 0;         // 0 means n + 1 (the structural bound)
    double delta = 0.99;        // target success probability for ell_min
    bool record_sections = false;
    int workers = 1;
    long stop_after_failures = 0;  // 0 disables the early-stop rule

    void validate() const;
};

struct TrialRecord {
    double epsilon = 0.0;
    int code_id = 0;
    long trial_index = 0;
    bool success = false;
    long iterations_used = 0;
    long residual = 0;  // unresolved bit erasures
};

struct IterationDistribution {
    std::vector<double> phi;  // phi[ell] = fraction of trials first succeeding at round ell
    std::vector<double> Phi;  // running sum; Phi.back() = 1 - P_B on the sample
};

struct EpsilonStats {
    double epsilon = 0.0;
    long trials = 0;  // total across codes
    double Pb = 0.0;
    double Pb_ci = 0.0;  // 95% half-width, bootstrap
    double PB = 0.0;
    double PB_ci = 0.0;  // 95% half-width, normal approximation
    IterationDistribution iter_dist;
    std::optional<long> ell_min;  // empty when delta is unreachable
};

struct AggregateStats {
    EnsembleParams params;
    double delta = 0.99;
    std::vector<EpsilonStats> per_epsilon;
};

// phi/Phi from trial records sharing one (ensemble, epsilon); unsuccessful
// trials contribute to no bin, so Phi(inf) = 1 - P_B.
IterationDistribution iteration_distribution(const std::vector<TrialRecord>& records);

// Smallest ell with Phi(ell) >= delta, or empty when unreachable.
std::optional<long> min_iterations(const IterationDistribution& dist, double delta);

// Aggregation per Eq.-style mean-over-codes of mean-over-trials; exposed so
// estimator tests can feed synthetic records.
EpsilonStats aggregate_epsilon(const std::vector<TrialRecord>& records, long n, double delta,
                               std::uint64_t bootstrap_seed);

// Full sweep: per code sample a fresh lift with a derived seed, per epsilon
// `trials` transmissions. Deterministic for a given master seed regardless
// of worker count. Raw records are appended to *raw when provided.
AggregateStats run_sweep(const SimConfig& config, std::vector<TrialRecord>* raw = nullptr);

// L = f(M) families for the scaling experiments.
struct ScalingRule {
    enum class Kind { constant, linear, polynomial, exponential };
    Kind kind = Kind::constant;
    long L0 = 100;     // constant
    double c = 0.5;    // linear ceil(c*M) and polynomial ceil((c*M)^p)
    double p = 2.0;    // polynomial exponent
    double a = 1.0;    // exponential ceil(a * b^(M - offset))
    double b = 2.0;
    long m_offset = 0;
    long max_L = 1 << 20;  // hard overflow guard

    long eval(long M) const;  // throws when the guard trips
    std::string name() const;
};

struct ScalingPoint {
    long M = 0;
    long L = 0;
    AggregateStats stats;
};

std::vector<ScalingPoint> scaling_experiment(const ScalingRule& rule, const std::vector<long>& Ms,
                                             const EnsembleParams& base,
                                             const std::vector<double>& epsilons, long trials,
                                             std::uint64_t master_seed, int workers = 1);

// Stable CSV renderings shared by the CLI and the determinism tests.
std::string results_csv(const AggregateStats& stats);
std::string iterdist_csv(const AggregateStats& stats);

}  // namespace ldpc_lab
