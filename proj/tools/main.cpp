// Command-line front end: reproducible experiments emitting CSV/JSON data
// files (plotting is left to external tools).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldpc_lab/bec_decoder.hpp"
#include "ldpc_lab/rng.hpp"
#include "ldpc_lab/density_evolution.hpp"
#include "ldpc_lab/ensemble_graph.hpp"
#include "ldpc_lab/error_floor.hpp"
#include "ldpc_lab/montecarlo.hpp"
#include "ldpc_lab/params.hpp"

using json = nlohmann::json;
using namespace ldpc_lab;

namespace {

constexpr const char* kVersion = "ldpc_lab 1.0.0";

// Exit codes: 1 generic/CLI, 2 config schema, 3 output dir.
constexpr int kExitConfig = 2;
constexpr int kExitOutput = 3;

std::string timestamp_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct ManifestWriter {
    std::string command_line;
    std::string config_dump;
    std::uint64_t master_seed = 0;
    std::string started;
    std::vector<std::string> outputs;

    void write(const std::filesystem::path& dir) const {
        json m;
        m["command_line"] = command_line;
        m["config_hash"] = fnv1a(config_dump);
        m["master_seed"] = master_seed;
        m["version"] = kVersion;
        m["started"] = started;
        m["finished"] = timestamp_now();
        m["outputs"] = outputs;
        std::ofstream os(dir / "manifest.json");
        os << m.dump(2) << '\n';
    }
};

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream probe(dir / ".write_probe");
    if (!probe) {
        std::cerr << "error: output directory '" << out_dir << "' is not writable\n";
        std::exit(kExitOutput);
    }
    probe.close();
    std::filesystem::remove(dir / ".write_probe", ec);
    return dir;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os) {
        std::cerr << "error: cannot write " << p << '\n';
        std::exit(kExitOutput);
    }
    os << content;
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("LDPC_LAB_SEED")) return std::strtoull(env, nullptr, 10);
    return flag_seed;
}

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        std::cerr << "error: config file '" << path << "' not found\n";
        std::exit(kExitConfig);
    }
    try {
        return json::parse(is);
    } catch (const std::exception& e) {
        std::cerr << "error: config parse failure: " << e.what() << '\n';
        std::exit(kExitConfig);
    }
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig cfg;
    try {
        cfg.params.l = j.at("l").get<int>();
        cfg.params.k = j.at("k").get<int>();
        cfg.params.L = j.at("L").get<long>();
        cfg.params.M = j.at("M").get<long>();
        cfg.epsilons = j.at("epsilons").get<std::vector<double>>();
        cfg.trials = j.value("trials", 100000L);
        cfg.code_samples = j.value("code_samples", 1);
        cfg.master_seed = j.value("master_seed", 1ULL);
        cfg.max_iters = j.value("max_iters", 0L);
        cfg.delta = j.value("delta", 0.99);
        cfg.stop_after_failures = j.value("stop_after_failures", 0L);
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: config schema violation: " << e.what() << '\n';
        std::exit(kExitConfig);
    }
    return cfg;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatially coupled LDPC ensembles over the BEC: construction, "
                 "density evolution, finite-length simulation, error-floor analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // allow global flags after the subcommand name

    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();
    app.add_option("--seed", seed, "Master seed (env LDPC_LAB_SEED overrides)")
        ->capture_default_str();
    app.add_option("--workers", workers, "Worker threads")->capture_default_str();

    int l = 3, k = 2;
    long L = 9, M = 64;

    // rate
    auto* rate = app.add_subcommand("rate", "Design rate of the coupled ensemble");
    rate->add_option("--l", l)->required();
    rate->add_option("--k", k)->required();
    rate->add_option("--L", L)->required();

    // threshold
    auto* threshold = app.add_subcommand("threshold", "BP threshold via density evolution");
    bool uncoupled = false;
    double tol_bisect = 1e-4;
    DESettings de_settings;
    threshold->add_option("--l", l)->capture_default_str();
    threshold->add_option("--k", k)->capture_default_str();
    threshold->add_option("--L", L)->capture_default_str();
    threshold->add_flag("--uncoupled", uncoupled, "Underlying (l, r) ensemble instead of a chain");
    threshold->add_option("--tol-bisect", tol_bisect)->capture_default_str();
    threshold->add_option("--tol-de", de_settings.tol)->capture_default_str();
    threshold->add_option("--max-iters", de_settings.max_iters)->capture_default_str();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep from a JSON config");
    std::string config_path;
    simulate->add_option("--config", config_path, "SimConfig JSON file")->required();

    // scaling
    auto* scaling = app.add_subcommand("scaling", "L = f(M) scaling experiment from a JSON config");
    scaling->add_option("--config", config_path, "Scaling JSON file")->required();

    // iterdist
    auto* iterdist = app.add_subcommand("iterdist", "Iteration count distribution");
    double epsilon = 0.465;
    long trials = 1000;
    double delta = 0.99;
    iterdist->add_option("--l", l)->capture_default_str();
    iterdist->add_option("--k", k)->capture_default_str();
    iterdist->add_option("--L", L)->required();
    iterdist->add_option("--M", M)->required();
    iterdist->add_option("--epsilon", epsilon)->capture_default_str();
    iterdist->add_option("--trials", trials)->capture_default_str();
    iterdist->add_option("--delta", delta, "Success probability target for ell_min")
        ->capture_default_str();

    // floor
    auto* floor_cmd = app.add_subcommand("floor", "Weight-2 codeword analysis");
    long samples = 0;
    floor_cmd->add_option("--l", l)->capture_default_str();
    floor_cmd->add_option("--k", k)->capture_default_str();
    floor_cmd->add_option("--L", L)->required();
    floor_cmd->add_option("--M", M)->required();
    floor_cmd->add_option("--samples", samples,
                          "Code samples for the empirical N2 histogram (0 = analytic only)")
        ->capture_default_str();

    // wave
    auto* wave = app.add_subcommand("wave", "Per-section residuals across decoding rounds");
    wave->add_option("--l", l)->capture_default_str();
    wave->add_option("--k", k)->capture_default_str();
    wave->add_option("--L", L)->required();
    wave->add_option("--M", M)->required();
    wave->add_option("--epsilon", epsilon)->capture_default_str();
    wave->add_option("--trials", trials)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    seed = effective_seed(seed);
    ManifestWriter manifest;
    manifest.command_line = join_args(argc, argv);
    manifest.master_seed = seed;
    manifest.started = timestamp_now();

    try {
        if (rate->parsed()) {
            EnsembleParams p{l, k, L, static_cast<long>(k)};
            Rational r = design_rate(p);
            std::cout << r.str() << ' ' << r.value() << '\n';
            return 0;
        }

        if (threshold->parsed()) {
            ThresholdResult res = uncoupled
                                      ? bp_threshold_uncoupled(l, k * l, tol_bisect, de_settings)
                                      : bp_threshold(build_coupled_protograph(
                                                         {l, k, L, static_cast<long>(k)}),
                                                     tol_bisect, de_settings);
            json out;
            out["l"] = l;
            out["k"] = k;
            if (uncoupled)
                out["L"] = nullptr;
            else
                out["L"] = L;
            out["epsilon_bp"] = res.epsilon_bp;
            out["bracket"] = {res.bracket_lo, res.bracket_hi};
            out["tol"] = res.tol_bisect;
            std::cout << out.dump(2) << '\n';
            auto dir = prepare_out_dir(out_dir);
            write_file(dir / "threshold.json", out.dump(2) + "\n");
            manifest.config_dump = out.dump();
            manifest.outputs = {"threshold.json"};
            manifest.write(dir);
            return 0;
        }

        if (simulate->parsed()) {
            json j = load_config(config_path);
            SimConfig cfg = sim_config_from_json(j);
            if (const char* env = std::getenv("LDPC_LAB_SEED"))
                cfg.master_seed = std::strtoull(env, nullptr, 10);
            cfg.workers = workers;
            auto dir = prepare_out_dir(out_dir);
            auto stats = run_sweep(cfg);
            write_file(dir / "results.csv", results_csv(stats));
            write_file(dir / "iterdist.csv", iterdist_csv(stats));
            manifest.config_dump = j.dump();
            manifest.master_seed = cfg.master_seed;
            manifest.outputs = {"results.csv", "iterdist.csv"};
            manifest.write(dir);
            return 0;
        }

        if (scaling->parsed()) {
            json j = load_config(config_path);
            ScalingRule rule;
            std::vector<long> Ms;
            EnsembleParams base;
            std::vector<double> eps_grid;
            long sc_trials;
            try {
                std::string family = j.at("family").get<std::string>();
                if (family == "constant") rule.kind = ScalingRule::Kind::constant;
                else if (family == "linear") rule.kind = ScalingRule::Kind::linear;
                else if (family == "polynomial") rule.kind = ScalingRule::Kind::polynomial;
                else if (family == "exponential") rule.kind = ScalingRule::Kind::exponential;
                else throw std::invalid_argument("unknown scaling family '" + family + "'");
                rule.L0 = j.value("L0", rule.L0);
                rule.c = j.value("c", rule.c);
                rule.p = j.value("p", rule.p);
                rule.a = j.value("a", rule.a);
                rule.b = j.value("b", rule.b);
                rule.m_offset = j.value("m_offset", rule.m_offset);
                rule.max_L = j.value("max_L", rule.max_L);
                Ms = j.at("Ms").get<std::vector<long>>();
                base.l = j.at("l").get<int>();
                base.k = j.at("k").get<int>();
                base.L = 1;
                base.M = base.k;
                eps_grid = j.at("epsilons").get<std::vector<double>>();
                sc_trials = j.value("trials", 100000L);
            } catch (const std::exception& e) {
                std::cerr << "error: config schema violation: " << e.what() << '\n';
                return kExitConfig;
            }
            auto dir = prepare_out_dir(out_dir);
            auto points = scaling_experiment(rule, Ms, base, eps_grid, sc_trials, seed, workers);
            std::string csv = "l,k,L,M,epsilon,trials,Pb,Pb_ci,PB,PB_ci\n";
            for (const auto& pt : points) {
                std::string block = results_csv(pt.stats);
                csv += block.substr(block.find('\n') + 1);
            }
            write_file(dir / "scaling.csv", csv);
            manifest.config_dump = j.dump();
            manifest.outputs = {"scaling.csv"};
            manifest.write(dir);
            return 0;
        }

        if (iterdist->parsed()) {
            SimConfig cfg;
            cfg.params = {l, k, L, M};
            cfg.epsilons = {epsilon};
            cfg.trials = trials;
            cfg.master_seed = seed;
            cfg.delta = delta;
            cfg.workers = workers;
            auto dir = prepare_out_dir(out_dir);
            auto stats = run_sweep(cfg);
            write_file(dir / "iterdist.csv", iterdist_csv(stats));
            const auto& s = stats.per_epsilon[0];
            std::cout << "trials " << s.trials << " PB " << s.PB << " ell_min(delta=" << delta
                      << ") ";
            if (s.ell_min)
                std::cout << *s.ell_min << '\n';
            else
                std::cout << "unreachable\n";
            manifest.config_dump = iterdist_csv(stats).substr(0, 64);
            manifest.outputs = {"iterdist.csv"};
            manifest.write(dir);
            return 0;
        }

        if (floor_cmd->parsed()) {
            EnsembleParams p{l, k, L, M};
            p.validate();
            auto dir = prepare_out_dir(out_dir);
            json out;
            out["lambda"] = poisson_lambda(p);
            out["clean_fraction"] = clean_fraction(p);
            json curve = json::array();
            for (double e = 0.05; e <= 0.451; e += 0.05)
                curve.push_back({e, expected_floor(p, e)});
            out["floor_curve"] = curve;
            std::vector<std::string> files = {"floor.json"};
            if (samples > 0) {
                auto dist = empirical_n2_distribution(p, samples, seed);
                out["samples"] = dist.samples;
                out["mean_n2"] = dist.mean;
                out["clean_fraction_empirical"] = dist.clean_fraction_empirical;
                out["chi2"] = dist.chi2;
                out["dof"] = dist.dof;
                out["p_value"] = dist.p_value;
                std::string csv = "n2,empirical_pmf,poisson_pmf\n";
                for (std::size_t i = 0; i < dist.empirical_pmf.size(); ++i)
                    csv += std::to_string(i) + ',' + std::to_string(dist.empirical_pmf[i]) + ',' +
                           std::to_string(dist.poisson_pmf[i]) + '\n';
                write_file(dir / "histogram.csv", csv);
                files.push_back("histogram.csv");
            }
            write_file(dir / "floor.json", out.dump(2) + "\n");
            std::cout << out.dump(2) << '\n';
            manifest.config_dump = out.dump();
            manifest.outputs = files;
            manifest.write(dir);
            return 0;
        }

        if (wave->parsed()) {
            EnsembleParams p{l, k, L, M};
            p.validate();
            auto dir = prepare_out_dir(out_dir);
            // Averaged over repeated transmissions of one fixed code sample
            // (noted in the manifest).
            auto g = sample_code(p, derive_seed(seed, 0x77617665ULL));
            const long sections = p.num_sections();
            std::vector<DecodeTrace> traces;
            std::size_t max_rows = 0;
            for (long t = 0; t < trials; ++t) {
                auto pat = sample_erasures(g.n, epsilon, derive_seed(seed, 0x7761ULL, t));
                traces.push_back(bp_decode(g, pat, g.n + 1, true));
                max_rows = std::max(max_rows, traces.back().residual_by_section.size());
            }
            // Rounds after a trial's fixed point keep contributing its final state.
            std::vector<std::vector<double>> sum(max_rows, std::vector<double>(sections, 0.0));
            for (const auto& trace : traces) {
                for (std::size_t r = 0; r < max_rows; ++r) {
                    std::size_t ri =
                        std::min<std::size_t>(r, trace.residual_by_section.size() - 1);
                    for (long s = 0; s < sections; ++s)
                        sum[r][s] += trace.residual_by_section[ri][s];
                }
            }
            // Row r is reached after r flooding rounds = 2r message passes.
            std::string csv = "round,section_index,residual_fraction\n";
            for (std::size_t r = 0; r < sum.size(); ++r)
                for (long s = 0; s < sections; ++s)
                    csv += std::to_string(2 * r) + ',' + std::to_string(s) + ',' +
                           std::to_string(sum[r][s] / (static_cast<double>(trials) * p.M)) + '\n';
            write_file(dir / "wave.csv", csv);
            manifest.config_dump = "wave averaging: trials of one fixed code sample";
            manifest.outputs = {"wave.csv"};
            manifest.write(dir);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
