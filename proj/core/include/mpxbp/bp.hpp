#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mpxbp/types.hpp"

namespace mpx {

enum class Model { single, constrained, correlated };

enum class Schedule { random_order, sequential };

struct BpConfig {
    int t_max = 100;
    double conv_tol = 1e-6;
    double n_sample = 0.05; // fraction of incident interlayer factors per update
    double w_fail = 0.2;    // relaxed constraint weights; (0,1) = hard constraints
    double w_pass = 0.8;
    double damping = 0.0;   // new = (1-damping)*computed + damping*old
    double init_noise = 0.05;
    double p_same = 0.9;    // correlated-model inference parameter
    std::uint64_t rng_seed = 0;
    Schedule schedule = Schedule::random_order;
    int alt_inner_sweeps = 5; // sweeps per layer pair in alternating mode

    void validate() const;
};

struct SweepCounts {
    long long intra = 0;
    long long inter = 0;
};

struct DetectionResult {
    Labeling labels;              // MMAP labels, argmax with lowest-index tie-break
    std::vector<double> beliefs;  // N*L*q, index (i*L + l)*q + a
    bool converged = false;
    int sweeps_used = 0;
    double final_conv = 0.0;
};

// Belief propagation for the three models. One engine instance is owned by
// a single trial; no shared mutable state across instances.
class BpEngine {
public:
    BpEngine(const MultiplexNetwork& net, const SbmParams& params, const BpConfig& config,
             Model model);

    // Uniform messages perturbed by +-init_noise, renormalized; fields from
    // the initial beliefs.
    void init_state();

    // One full epoch (all layers). Returns conv = sum |m_new - m_old| over
    // all updated messages.
    double sweep();

    // Constrained-model epoch restricted to layers l1, l2; every other
    // layer's messages are held fixed (they still enter products).
    double pair_sweep(int l1, int l2);

    DetectionResult run();

    // L > 2 scheme: per outer round, each pair in the schedule gets up to
    // alt_inner_sweeps pair_sweeps. Default schedule: all unordered pairs.
    DetectionResult run_alternating(std::vector<std::pair<int, int>> pair_schedule = {});

    void update_external_field(int l);
    void recompute_all_fields();

    // --- state access (tests, oracles, dumps) ---
    int q() const { return q_; }
    int N() const { return N_; }
    int L() const { return L_; }
    // directed intra message u->v for undirected edge k=(u,v): index 2k
    // (u->v) and 2k+1 (v->u); q consecutive doubles per message.
    std::vector<double>& intra_messages(int l) { return intra_[l]; }
    double* intra_message(int l, int i, int j); // nullptr when (i,j) not an edge
    // message from i(l) toward the factor joining (i,j) across layers (l,lp)
    double* inter_message(int l, int lp, int i, int j);
    // correlated-model message from i(l) to i(lp)
    double* corr_message(int l, int lp, int i);
    std::vector<double>& beliefs() { return beliefs_; }
    const std::vector<double>& beliefs() const { return beliefs_; }
    double* belief(int i, int l) { return beliefs_.data() + (static_cast<size_t>(i) * L_ + l) * q_; }
    std::vector<double> field(int l) const;
    const SweepCounts& last_sweep_counts() const { return counts_; }
    // Constraint-factor sum toward i(l) for the factor joining (i,j) across
    // (l,lp), computed from the current inter messages.
    void factor_contribution(int l, int lp, int i, int j, double* f) const;

    // Sum over the q entries of every message/belief, for invariant checks.
    double max_normalization_error() const;

    DetectionResult extract_result(bool converged, int sweeps, double conv) const;

private:
    struct LayerGraph {
        std::vector<int> off;     // CSR offsets, size N+1
        std::vector<int> nbr;     // neighbor node id
        std::vector<int> in_msg;  // directed message index nbr->node
        std::vector<int> out_msg; // directed message index node->nbr
        std::vector<int> eu, ev;  // undirected edge endpoints
        int E = 0;
    };

    void build_graphs(const MultiplexNetwork& net);
    void layer_block(int l, bool restrict_pair, int pair_other, double& conv);
    void trailing_inter_pass(int l, int lp, double& conv);
    void update_intra_message(int l, int i, int j, int msg_idx, double& conv);
    void update_inter_message(int l, int lp, int i, int j, double& conv);
    void update_belief(int i, int l);
    void neighborhood_product(int l, int i, int exclude_nbr, double* w);
    void factor_product(int i, int l, int exclude_j, int exclude_lp, double* w);
    void corr_chain_product(int i, int l, int exclude_lp, double* w);
    int sample_count(int population) const;
    void normalize_store(double* target, const double* w, double* conv);

    int q_, N_, L_;
    Model model_;
    BpConfig cfg_;
    std::vector<double> n_;        // prior fractions
    std::vector<double> c_;        // q*q affinity
    std::vector<LayerGraph> graphs_;
    std::vector<std::vector<double>> intra_; // per layer, 2E*q
    std::vector<double> inter_;    // constrained: L*L*N*N*q
    std::vector<double> corr_;     // correlated: L*L*N*q
    std::vector<double> beliefs_;  // N*L*q
    std::vector<double> fields_;   // L*q
    std::vector<double> prior_field_; // L*q: n_a * exp(-h_a)
    std::vector<int> factor_pool_; // scratch permutation of incident factors
    std::vector<int> edge_order_;  // scratch for per-layer edge shuffles
    std::vector<double> scratch_w_, scratch_t_, scratch_f_;
    std::mt19937_64 rng_;
    SweepCounts counts_;
};

} // namespace mpx
