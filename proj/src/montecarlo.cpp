#include "ldpc_lab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

#include "ldpc_lab/rng.hpp"

namespace ldpc_lab {

namespace {
constexpr std::uint64_t kCodeTag = 0x636f646573616d70ULL;   // "codesamp"
constexpr std::uint64_t kTrialTag = 0x747269616c736564ULL;  // "trialsed"
constexpr std::uint64_t kBootTag = 0x626f6f7473747261ULL;   // "bootstra"
constexpr std::uint64_t kScaleTag = 0x7363616c65707473ULL;  // "scalepts"

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}
}  // namespace

void SimConfig::validate() const {
    params.validate();
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (code_samples < 1) throw std::invalid_argument("code_samples must be >= 1");
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must lie in (0,1)");
    if (epsilons.empty()) throw std::invalid_argument("epsilon grid is empty");
    for (double e : epsilons)
        if (e < 0.0 || e > 1.0) throw std::invalid_argument("epsilon outside [0,1]");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (stop_after_failures < 0) throw std::invalid_argument("stop_after_failures must be >= 0");
}

IterationDistribution iteration_distribution(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw std::invalid_argument("no trial records");
    IterationDistribution d;
    long max_ell = 0;
    for (const auto& r : records)
        if (r.success) max_ell = std::max(max_ell, r.iterations_used);
    d.phi.assign(max_ell + 1, 0.0);
    const double w = 1.0 / static_cast<double>(records.size());
    for (const auto& r : records)
        if (r.success) d.phi[r.iterations_used] += w;
    d.Phi.resize(d.phi.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.phi.size(); ++i) {
        acc += d.phi[i];
        d.Phi[i] = acc;
    }
    return d;
}

std::optional<long> min_iterations(const IterationDistribution& dist, double delta) {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must lie in (0,1)");
    for (std::size_t i = 0; i < dist.Phi.size(); ++i)
        if (dist.Phi[i] >= delta) return static_cast<long>(i);
    return std::nullopt;
}

EpsilonStats aggregate_epsilon(const std::vector<TrialRecord>& records, long n, double delta,
                               std::uint64_t bootstrap_seed) {
    if (records.empty()) throw std::invalid_argument("no trial records");
    EpsilonStats s;
    s.epsilon = records.front().epsilon;
    s.trials = static_cast<long>(records.size());

    // Mean over codes of the per-code trial means.
    std::map<int, std::pair<long, long>> per_code;  // code -> (failures, residual sum)
    std::map<int, long> per_code_trials;
    for (const auto& r : records) {
        auto& acc = per_code[r.code_id];
        if (!r.success) ++acc.first;
        acc.second += r.residual;
        ++per_code_trials[r.code_id];
    }
    double pb_sum = 0.0, PB_sum = 0.0;
    for (const auto& [code, acc] : per_code) {
        const double t = static_cast<double>(per_code_trials[code]);
        PB_sum += static_cast<double>(acc.first) / t;
        pb_sum += static_cast<double>(acc.second) / (t * static_cast<double>(n));
    }
    const double codes = static_cast<double>(per_code.size());
    s.PB = PB_sum / codes;
    s.Pb = pb_sum / codes;

    const double N = static_cast<double>(records.size());
    s.PB_ci = 1.96 * std::sqrt(std::max(0.0, s.PB * (1.0 - s.PB)) / N);

    // Bootstrap half-width for Pb (200 resamples over pooled trials).
    std::mt19937_64 rng(derive_seed(bootstrap_seed, kBootTag));
    constexpr int kResamples = 200;
    double mean_acc = 0.0, sq_acc = 0.0;
    for (int b = 0; b < kResamples; ++b) {
        long sum = 0;
        for (std::size_t i = 0; i < records.size(); ++i)
            sum += records[uniform_below(rng, records.size())].residual;
        double m = static_cast<double>(sum) / (N * static_cast<double>(n));
        mean_acc += m;
        sq_acc += m * m;
    }
    double var = sq_acc / kResamples - (mean_acc / kResamples) * (mean_acc / kResamples);
    s.Pb_ci = 1.96 * std::sqrt(std::max(0.0, var));

    s.iter_dist = iteration_distribution(records);
    s.ell_min = min_iterations(s.iter_dist, delta);
    return s;
}

namespace {

void run_trial_range(const TannerGraph& g, double epsilon, int code_id, long eps_index,
                     std::uint64_t master_seed, long max_iters, long begin, long end,
                     TrialRecord* out) {
    for (long t = begin; t < end; ++t) {
        std::uint64_t seed =
            derive_seed(derive_seed(master_seed, kTrialTag),
                        (static_cast<std::uint64_t>(code_id) << 32) | static_cast<std::uint64_t>(eps_index),
                        static_cast<std::uint64_t>(t));
        ErasurePattern pat = sample_erasures(g.n, epsilon, seed);
        DecodeTrace trace = bp_decode(g, pat, max_iters, false);
        TrialRecord& r = out[t - begin];
        r.epsilon = epsilon;
        r.code_id = code_id;
        r.trial_index = t;
        r.success = trace.success;
        r.iterations_used = trace.iterations_used;
        r.residual = trace.final_residual;
    }
}

}  // namespace

AggregateStats run_sweep(const SimConfig& config, std::vector<TrialRecord>* raw) {
    config.validate();
    const long max_iters = config.max_iters > 0 ? config.max_iters
                                                : config.params.num_variables() + 1;
    const CoupledProtograph proto = build_coupled_protograph(config.params);

    AggregateStats agg;
    agg.params = config.params;
    agg.delta = config.delta;

    std::vector<std::vector<TrialRecord>> per_eps(config.epsilons.size());

    for (int code_id = 0; code_id < config.code_samples; ++code_id) {
        const std::uint64_t code_seed =
            derive_seed(config.master_seed, kCodeTag, static_cast<std::uint64_t>(code_id));
        const TannerGraph g = lift(proto, config.params, code_seed);

        for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei) {
            const double eps = config.epsilons[ei];
            auto& records = per_eps[ei];
            // Early stop, when enabled, is decided only at block boundaries
            // in trial-index order, keeping results scheduling-independent.
            const long block = config.stop_after_failures > 0
                                   ? std::min<long>(config.trials, 1024)
                                   : config.trials;
            long done = 0, failures = 0;
            std::vector<TrialRecord> buf;
            while (done < config.trials) {
                const long count = std::min(block, config.trials - done);
                buf.resize(count);
                const int nw = static_cast<int>(
                    std::min<long>(config.workers, std::max<long>(1, count)));
                if (nw <= 1) {
                    run_trial_range(g, eps, code_id, static_cast<long>(ei), config.master_seed,
                                    max_iters, done, done + count, buf.data());
                } else {
                    std::vector<std::thread> pool;
                    const long chunk = (count + nw - 1) / nw;
                    for (int w = 0; w < nw; ++w) {
                        const long b = done + w * chunk;
                        const long e = std::min(done + count, b + chunk);
                        if (b >= e) break;
                        pool.emplace_back(run_trial_range, std::cref(g), eps, code_id,
                                          static_cast<long>(ei), config.master_seed, max_iters, b,
                                          e, buf.data() + (b - done));
                    }
                    for (auto& th : pool) th.join();
                }
                for (const auto& r : buf) {
                    records.push_back(r);
                    if (!r.success) ++failures;
                }
                done += count;
                if (config.stop_after_failures > 0 && failures >= config.stop_after_failures)
                    break;
            }
        }
    }

    for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei) {
        auto& records = per_eps[ei];
        agg.per_epsilon.push_back(aggregate_epsilon(
            records, config.params.num_variables(), config.delta,
            derive_seed(config.master_seed, static_cast<std::uint64_t>(ei))));
        if (raw) raw->insert(raw->end(), records.begin(), records.end());
    }
    return agg;
}

long ScalingRule::eval(long M) const {
    double value = 0.0;
    switch (kind) {
        case Kind::constant:
            value = static_cast<double>(L0);
            break;
        case Kind::linear:
            value = std::ceil(c * static_cast<double>(M));
            break;
        case Kind::polynomial:
            value = std::ceil(std::pow(c * static_cast<double>(M), p));
            break;
        case Kind::exponential:
            value = std::ceil(a * std::pow(b, static_cast<double>(M - m_offset)));
            break;
    }
    if (!(value >= 1.0))
        throw std::invalid_argument("scaling rule gives L < 1 at M=" + std::to_string(M));
    if (value > static_cast<double>(max_L))
        throw std::runtime_error("scaling rule overflows L cap " + std::to_string(max_L) +
                                 " at M=" + std::to_string(M));
    return static_cast<long>(value);
}

std::string ScalingRule::name() const {
    switch (kind) {
        case Kind::constant: return "constant";
        case Kind::linear: return "linear";
        case Kind::polynomial: return "polynomial";
        case Kind::exponential: return "exponential";
    }
    return "?";
}

std::vector<ScalingPoint> scaling_experiment(const ScalingRule& rule, const std::vector<long>& Ms,
                                             const EnsembleParams& base,
                                             const std::vector<double>& epsilons, long trials,
                                             std::uint64_t master_seed, int workers) {
    std::vector<ScalingPoint> out;
    for (long M : Ms) {
        ScalingPoint pt;
        pt.M = M;
        pt.L = rule.eval(M);
        SimConfig cfg;
        cfg.params = base;
        cfg.params.M = M;
        cfg.params.L = pt.L;
        cfg.epsilons = epsilons;
        cfg.trials = trials;
        cfg.master_seed = derive_seed(master_seed, kScaleTag, static_cast<std::uint64_t>(M));
        cfg.workers = workers;
        pt.stats = run_sweep(cfg);
        out.push_back(std::move(pt));
    }
    return out;
}

std::string results_csv(const AggregateStats& stats) {
    std::string out = "l,k,L,M,epsilon,trials,Pb,Pb_ci,PB,PB_ci\n";
    for (const auto& s : stats.per_epsilon) {
        out += std::to_string(stats.params.l) + ',' + std::to_string(stats.params.k) + ',' +
               std::to_string(stats.params.L) + ',' + std::to_string(stats.params.M) + ',' +
               fmt_double(s.epsilon) + ',' + std::to_string(s.trials) + ',' + fmt_double(s.Pb) +
               ',' + fmt_double(s.Pb_ci) + ',' + fmt_double(s.PB) + ',' + fmt_double(s.PB_ci) +
               '\n';
    }
    return out;
}

std::string iterdist_csv(const AggregateStats& stats) {
    std::string out = "epsilon,L,M,ell,phi,Phi\n";
    for (const auto& s : stats.per_epsilon) {
        for (std::size_t ell = 0; ell < s.iter_dist.phi.size(); ++ell) {
            out += fmt_double(s.epsilon) + ',' + std::to_string(stats.params.L) + ',' +
                   std::to_string(stats.params.M) + ',' + std::to_string(ell) + ',' +
                   fmt_double(s.iter_dist.phi[ell]) + ',' + fmt_double(s.iter_dist.Phi[ell]) + '\n';
        }
    }
    return out;
}

}  // namespace ldpc_lab
