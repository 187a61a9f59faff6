// Command-line front end: generate benchmark networks, run detection on
// edge-list files, and drive the sweep/parascan experiment batches.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mpxbp/generate.hpp"
#include "mpxbp/harness.hpp"
#include "mpxbp/io.hpp"

namespace fs = std::filesystem;
using namespace mpx;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
};

ExperimentConfig load_config(const CommonOpts& opts, CLI::App* cmd) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) cfg = parse_config_file(opts.config_path);
    if (!opts.out_dir.empty() && cmd->count("--out")) cfg.out_dir = opts.out_dir;
    if (cfg.out_dir.empty()) cfg.out_dir = ".";
    fs::create_directories(cfg.out_dir);
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key=value config file");
    cmd->add_option("--out", opts.out_dir, "output directory");
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    return os;
}

// --- generate ----------------------------------------------------------

int cmd_generate(const ExperimentConfig& cfg) {
    fs::path dir(cfg.out_dir);
    MultiplexNetwork net;
    Labeling truth(1, 1, 1);
    double eps = cfg.epsilon_grid.front();
    auto aff = BenchmarkAffinity::from_epsilon_degree(eps, cfg.avg_degree, 2);
    switch (cfg.scenario) {
        case Scenario::single: {
            auto params = BenchmarkAffinity::from_epsilon_degree(eps, cfg.avg_degree, cfg.q)
                              .expand(cfg.q, cfg.N);
            GeneratedLayer layer = generate_single_layer(params, cfg.seed);
            net.N = cfg.N;
            net.L = 1;
            net.layers = {layer.edges};
            truth = Labeling(cfg.N, 1, cfg.q);
            for (int i = 0; i < cfg.N; ++i) truth.at(i, 0) = layer.labels[i];
            break;
        }
        case Scenario::homogeneous2:
            std::tie(net, truth) = generate_multiplex_wpp(homogeneous2_structure(cfg.N), aff, cfg.seed);
            break;
        case Scenario::heterogeneous2:
        case Scenario::parascan:
            std::tie(net, truth) = generate_multiplex_wpp(heterogeneous2_structure(cfg.N), aff, cfg.seed);
            break;
        case Scenario::threelayer:
            std::tie(net, truth) = generate_multiplex_wpp(threelayer_structure(cfg.N), aff, cfg.seed);
            break;
        case Scenario::correlated: {
            auto params = BenchmarkAffinity::from_epsilon_degree(eps, cfg.avg_degree, cfg.q)
                              .expand(cfg.q, cfg.N);
            std::tie(net, truth) = generate_correlated(params, cfg.p_same, cfg.L, cfg.seed);
            break;
        }
        case Scenario::qscan:
            throw std::runtime_error("generate: qscan is a sweep-only scenario");
    }
    {
        auto os = open_out(dir / "network.txt");
        write_network(os, net, truth.q);
    }
    {
        auto os = open_out(dir / "labels.txt");
        write_labels(os, truth);
    }
    std::cout << "wrote " << (dir / "network.txt").string() << " and "
              << (dir / "labels.txt").string() << "\n";
    return 0;
}

// --- detect ------------------------------------------------------------

int cmd_detect(const ExperimentConfig& cfg, const std::string& network_path,
               const std::string& truth_path, int q_inf) {
    std::ifstream is(network_path);
    if (!is) throw std::runtime_error("cannot open network file: " + network_path);
    auto [net, q_file] = read_network(is);
    int q = q_inf > 0 ? q_inf : q_file;
    double eps = cfg.epsilon_grid.front();
    SbmParams params = BenchmarkAffinity::from_epsilon_degree(eps, cfg.avg_degree, q).expand(q, net.N);

    BpConfig bp = cfg.bp;
    bp.rng_seed = cfg.seed;
    BpEngine engine(net, params, bp, cfg.model);
    DetectionResult det = engine.run();

    fs::path dir(cfg.out_dir);
    {
        auto os = open_out(dir / "beliefs.csv");
        write_belief_csv(os, det.beliefs, net.N, net.L, q);
    }
    {
        auto os = open_out(dir / "labels.csv");
        write_label_csv(os, det.labels);
    }

    TrialResult r;
    r.scenario = "detect";
    r.model = to_string(cfg.model);
    r.epsilon = eps;
    r.p_same = cfg.model == Model::correlated ? bp.p_same : 0;
    r.seed = cfg.seed;
    r.converged = det.converged;
    r.sweeps_used = det.sweeps_used;
    r.local_pass_count = net.L >= 2 ? local_constraint_score(det.labels) : 0;
    if (net.L >= 2) r.cross_layer_match = cross_layer_match_fraction(det.labels, 0, 1);
    if (!truth_path.empty()) {
        std::ifstream ts(truth_path);
        if (!ts) throw std::runtime_error("cannot open label file: " + truth_path);
        Labeling truth = read_labels(ts, q_file);
        int qq = std::max(truth.q, q);
        truth.q = qq;
        Labeling predicted = det.labels;
        predicted.q = qq;
        std::vector<double> n(qq, 0.0);
        long long total = 0;
        for (Label lab : truth.t)
            if (lab != kNoLabel) {
                n[lab - 1] += 1;
                ++total;
            }
        for (double& x : n) x /= std::max<long long>(total, 1);
        if (qq <= 8) {
            ScoreReport report = normalized_agreement(truth, predicted, n);
            r.q_norm = report.q_norm;
            r.agreement = report.agreement;
        }
    }
    {
        auto os = open_out(dir / "trial.csv");
        write_trial_csv_header(os);
        write_trial_csv_row(os, r);
    }
    std::cout << "converged=" << (det.converged ? 1 : 0) << " sweeps=" << det.sweeps_used
              << " Q=" << r.q_norm << "\n";
    return 0;
}

// --- sweep -------------------------------------------------------------

void write_outputs(const fs::path& dir, const std::vector<TrialResult>& trials,
                   const std::vector<CurvePoint>& curve, bool heatmap_plot) {
    {
        auto os = open_out(dir / "trials.csv");
        write_trial_csv_header(os);
        for (const auto& r : trials) write_trial_csv_row(os, r);
    }
    {
        auto os = open_out(dir / "curve.csv");
        write_curve_csv_header(os);
        for (const auto& p : curve) write_curve_csv_row(os, p);
    }
    emit_plot_script((dir / "plot.py").string(), "curve.csv", heatmap_plot);
}

int cmd_sweep(const ExperimentConfig& cfg) {
    fs::path dir(cfg.out_dir);
    std::vector<TrialResult> all_trials;
    std::vector<CurvePoint> curve;
    std::uint64_t batch = 0;

    auto run_batch = [&](const std::function<TrialResult(std::uint64_t)>& fn) {
        std::uint64_t base = trial_seed(cfg.seed, ++batch);
        auto rows = run_trials(cfg.trials, cfg.workers,
                               [&](int i) { return fn(trial_seed(base, i)); });
        all_trials.insert(all_trials.end(), rows.begin(), rows.end());
        curve.push_back(aggregate(rows, cfg.top_k));
    };

    switch (cfg.scenario) {
        case Scenario::single:
            for (double eps : cfg.epsilon_grid)
                run_batch([&](std::uint64_t s) {
                    return run_single_layer_trial(cfg.N, eps, cfg.avg_degree, cfg.bp, s);
                });
            break;
        case Scenario::homogeneous2:
            for (double eps : cfg.epsilon_grid)
                run_batch([&](std::uint64_t s) {
                    return run_homogeneous_trial(cfg.N, eps, cfg.avg_degree, cfg.model, cfg.q,
                                                 cfg.bp, s);
                });
            break;
        case Scenario::correlated:
            for (double p_same : cfg.p_same_grid)
                for (double eps : cfg.epsilon_grid)
                    run_batch([&](std::uint64_t s) {
                        return run_correlated_trial(cfg.N, eps, cfg.avg_degree, p_same, cfg.q,
                                                    cfg.bp, s);
                    });
            break;
        case Scenario::heterogeneous2:
            for (Model model : {Model::constrained, Model::correlated})
                for (double eps : cfg.epsilon_grid)
                    run_batch([&](std::uint64_t s) {
                        return run_heterogeneous_trial(cfg.N, eps, cfg.avg_degree, model, cfg.bp, s);
                    });
            break;
        case Scenario::qscan:
            for (int q_inf : {2, 4})
                for (double eps : cfg.epsilon_grid)
                    run_batch([&](std::uint64_t s) {
                        TrialResult r = run_homogeneous_trial(cfg.N, eps, cfg.avg_degree, cfg.model,
                                                              q_inf, cfg.bp, s);
                        r.model += "-q" + std::to_string(q_inf);
                        return r;
                    });
            break;
        case Scenario::threelayer:
            for (bool alternating : {true, false})
                for (double eps : cfg.epsilon_grid)
                    run_batch([&](std::uint64_t s) {
                        return run_threelayer_trial(cfg.N, eps, cfg.avg_degree, cfg.bp, s,
                                                    alternating);
                    });
            break;
        case Scenario::parascan:
            throw std::runtime_error("sweep: use the parascan subcommand for this scenario");
    }
    write_outputs(dir, all_trials, curve, false);
    std::cout << "wrote " << (dir / "curve.csv").string() << " (" << all_trials.size()
              << " trials)\n";
    return 0;
}

// --- parascan ----------------------------------------------------------

int cmd_parascan(const ExperimentConfig& cfg) {
    fs::path dir(cfg.out_dir);
    auto trials_os = open_out(dir / "trials.csv");
    write_trial_csv_header(trials_os);
    auto heat_os = open_out(dir / "heatmap.csv");
    heat_os << "w_pass,n_sample,trials,wpp_pass_fraction,band\n";

    std::uint64_t batch = 0;
    for (double w_pass : cfg.w_pass_grid)
        for (double n_sample : cfg.n_sample_grid) {
            BpConfig bp = cfg.bp;
            bp.w_pass = w_pass;
            bp.w_fail = 1.0 - w_pass;
            bp.n_sample = n_sample;
            std::uint64_t base = trial_seed(cfg.seed, ++batch);
            auto rows = run_trials(cfg.trials, cfg.workers, [&](int i) {
                return run_heterogeneous_trial(cfg.N, cfg.parascan_epsilon, cfg.avg_degree,
                                               Model::constrained, bp, trial_seed(base, i));
            });
            int pass = 0;
            for (const auto& r : rows) {
                write_trial_csv_row(trials_os, r);
                pass += r.wpp_majority_pass ? 1 : 0;
            }
            double frac = static_cast<double>(pass) / rows.size();
            heat_os << w_pass << ',' << n_sample << ',' << rows.size() << ',' << frac << ','
                    << (frac >= 0.5 ? 1 : 0) << '\n';
        }
    emit_plot_script((dir / "plot.py").string(), "heatmap.csv", true);
    std::cout << "wrote " << (dir / "heatmap.csv").string() << "\n";
    return 0;
}

// --- score -------------------------------------------------------------

int cmd_score(const std::string& truth_path, const std::string& predicted_path) {
    auto read_label_file = [](const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("cannot open label file: " + path);
        std::stringstream buf;
        buf << is.rdbuf();
        int q = 1;
        {
            std::stringstream scan(buf.str());
            int l, i, t;
            while (scan >> l >> i >> t) q = std::max(q, t);
        }
        std::stringstream parse(buf.str());
        return read_labels(parse, q);
    };
    Labeling truth = read_label_file(truth_path);
    Labeling predicted = read_label_file(predicted_path);
    if (truth.N != predicted.N || truth.L != predicted.L)
        throw std::runtime_error("score: label files have different shapes");
    int q = std::max(truth.q, predicted.q);
    truth.q = q;
    predicted.q = q;
    std::vector<double> n(q, 0.0);
    long long total = 0;
    for (Label lab : truth.t)
        if (lab != kNoLabel) {
            n[lab - 1] += 1;
            ++total;
        }
    for (double& x : n) x /= std::max<long long>(total, 1);
    ScoreReport report = normalized_agreement(truth, predicted, n);
    long long local = predicted.L >= 2 ? local_constraint_score(predicted) : 0;
    std::cout << "agreement,q_norm,local_pass_count\n"
              << report.agreement << ',' << report.q_norm << ',' << local << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiplex SBM benchmark generator and BP community detection"};
    app.require_subcommand(1);

    CommonOpts gen_opts, det_opts, sweep_opts, para_opts;
    std::string network_path, truth_path, predicted_path;
    int q_inf = 0;

    auto* gen = app.add_subcommand("generate", "Generate a benchmark network + label files");
    add_common(gen, gen_opts);
    auto* det = app.add_subcommand("detect", "Run BP detection on an edge-list file");
    add_common(det, det_opts);
    det->add_option("--network", network_path, "edge-list file")->required();
    det->add_option("--truth", truth_path, "planted label file (optional, enables scoring)");
    det->add_option("--q", q_inf, "inference label-space size (default: from network header)");
    auto* sweep = app.add_subcommand("sweep", "Run a trial batch over the configured grids");
    add_common(sweep, sweep_opts);
    auto* para = app.add_subcommand("parascan", "Scan (w_pass, n_sample) WPP-convergence ratios");
    add_common(para, para_opts);
    auto* score = app.add_subcommand("score", "Score a predicted label file against planted labels");
    score->add_option("--truth", truth_path, "planted label file")->required();
    score->add_option("--predicted", predicted_path, "predicted label file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(load_config(gen_opts, gen));
        if (det->parsed()) return cmd_detect(load_config(det_opts, det), network_path, truth_path, q_inf);
        if (sweep->parsed()) return cmd_sweep(load_config(sweep_opts, sweep));
        if (para->parsed()) return cmd_parascan(load_config(para_opts, para));
        if (score->parsed()) return cmd_score(truth_path, predicted_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
