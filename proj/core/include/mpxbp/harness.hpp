#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mpxbp/bp.hpp"
#include "mpxbp/metrics.hpp"
#include "mpxbp/types.hpp"

namespace mpx {

enum class Scenario { single, homogeneous2, heterogeneous2, correlated, qscan, parascan, threelayer };

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);
std::string to_string(Model m);
Model model_from_string(const std::string& s);

struct ExperimentConfig {
    Scenario scenario = Scenario::homogeneous2;
    Model model = Model::constrained;
    int N = 200;
    int L = 2;
    int q = 2;                 // inference label-space size
    double avg_degree = 3.0;
    std::vector<double> epsilon_grid = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    std::vector<double> p_same_grid = {0.0, 0.1, 0.5, 0.9, 1.0};
    double p_same = 0.9;       // generation parameter for the correlated scenario
    int trials = 30;
    int top_k = 20;
    int workers = 1;
    std::uint64_t seed = 1;
    BpConfig bp;
    std::string out_dir = ".";
    // parascan grids
    std::vector<double> w_pass_grid = {0.6, 0.7, 0.8, 0.9, 0.95};
    std::vector<double> n_sample_grid = {0.01, 0.02, 0.05, 0.1, 0.2};
    double parascan_epsilon = 0.2;

    void validate() const;
};

// Flat key=value config file ('#' comments). Unknown keys are an error.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);
void write_config(std::ostream& os, const ExperimentConfig& cfg);

struct TrialResult {
    std::string scenario;
    std::string model;
    double epsilon = 0;
    double p_same = 0;
    std::uint64_t seed = 0;
    double q_norm = 0;         // global-permutation normalized agreement
    double q_norm_layers = 0;  // per-layer permutation, averaged over layers
    double agreement = 0;
    bool converged = false;
    int sweeps_used = 0;
    bool wpp_majority_pass = false;
    bool planted_match = false; // majority labels reproduce the planted sharing pattern exactly
    long long local_pass_count = 0;
    double cross_layer_match = 0;
    double wallclock_ms = 0;
};

void write_trial_csv_header(std::ostream& os);
void write_trial_csv_row(std::ostream& os, const TrialResult& r);
std::vector<TrialResult> read_trial_csv(std::istream& is);

// --- planted structures -------------------------------------------------

// L=2, two equal communities shared by both layers.
CommunityStructure homogeneous2_structure(int N);
// L=2; community 1 = first half in both layers; second half is one
// community in layer 1 and splits into two equal communities in layer 2.
CommunityStructure heterogeneous2_structure(int N);
// L=3, 5 pairwise-distinct communities: community 1 shared by layers 1-2,
// community 3 shared by layers 2-3, layer 3 splits its first half in two;
// layer 2's non-shared community covers only part of the second half.
CommunityStructure threelayer_structure(int N);

std::vector<PlantedCluster> planted_clusters(const CommunityStructure& structure);

// Majority label per (layer, community) slot (ties fail); true iff two slots
// share a label exactly when they are the same planted community.
bool planted_majority_matches(const Labeling& predicted, const CommunityStructure& structure);

// --- per-trial runners --------------------------------------------------

TrialResult run_single_layer_trial(int N, double epsilon, double avg_degree, const BpConfig& bp,
                                   std::uint64_t seed);
// Homogeneous two-layer network (identical labels, independent edges);
// inference with the given model and label-space size q_inf.
TrialResult run_homogeneous_trial(int N, double epsilon, double avg_degree, Model model, int q_inf,
                                  const BpConfig& bp, std::uint64_t seed);
TrialResult run_heterogeneous_trial(int N, double epsilon, double avg_degree, Model model,
                                    const BpConfig& bp, std::uint64_t seed);
// Correlated two-layer generation (labels persist with prob p_same) and
// inference with the correlated model using the same p_same.
TrialResult run_correlated_trial(int N, double epsilon, double avg_degree, double p_same, int q,
                                 const BpConfig& bp, std::uint64_t seed);
TrialResult run_threelayer_trial(int N, double epsilon, double avg_degree, const BpConfig& bp,
                                 std::uint64_t seed, bool alternating);

// Chance rate of WPP-satisfying cluster labels when each layer's clusters
// get independent uniformly-drawn distinct labels from {1..q}.
double simulate_random_cluster_wpp_rate(const CommunityStructure& structure, int q, int trials,
                                        std::uint64_t seed);

// --- orchestration ------------------------------------------------------

// Runs fn(0..count-1) on `workers` threads; results keep index order.
std::vector<TrialResult> run_trials(int count, int workers,
                                    const std::function<TrialResult(int)>& fn);

struct CurvePoint {
    std::string model;
    double p_same = 0;
    double epsilon = 0;
    int trials = 0;
    double mean_q = 0, se_q = 0;
    double mean_q_layers = 0, se_q_layers = 0;
    double mean_agreement = 0, se_agreement = 0;
    double wpp_pass_fraction = 0;
    double planted_match_fraction = 0;
    double top_k_agreement = 0; // mean agreement of top-k trials by local_pass_count
};

CurvePoint aggregate(const std::vector<TrialResult>& results, int top_k);
void write_curve_csv_header(std::ostream& os);
void write_curve_csv_row(std::ostream& os, const CurvePoint& p);

// Mixes a base seed with a trial index into an independent stream seed.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

// Self-contained matplotlib script that renders curve/heatmap CSVs.
void emit_plot_script(const std::string& path, const std::string& csv_name, bool heatmap);

} // namespace mpx
