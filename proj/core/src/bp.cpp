#include "mpxbp/bp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mpx {

namespace {
constexpr double kRescaleFloor = 1e-140;
constexpr int kRescaleStride = 24;
} // namespace

void BpConfig::validate() const {
    if (t_max < 1) throw std::invalid_argument("BpConfig: t_max must be >= 1");
    if (conv_tol <= 0) throw std::invalid_argument("BpConfig: conv_tol must be > 0");
    if (n_sample <= 0 || n_sample > 1) throw std::invalid_argument("BpConfig: n_sample must be in (0,1]");
    if (damping < 0 || damping >= 1) throw std::invalid_argument("BpConfig: damping must be in [0,1)");
    if (init_noise < 0) throw std::invalid_argument("BpConfig: init_noise must be >= 0");
    if (w_fail < 0 || w_pass < 0) throw std::invalid_argument("BpConfig: negative constraint weight");
    if (p_same < 0 || p_same > 1) throw std::invalid_argument("BpConfig: p_same must be in [0,1]");
    if (alt_inner_sweeps < 1) throw std::invalid_argument("BpConfig: alt_inner_sweeps must be >= 1");
}

BpEngine::BpEngine(const MultiplexNetwork& net, const SbmParams& params, const BpConfig& config,
                   Model model)
    : q_(params.q), N_(params.N), L_(net.L), model_(model), cfg_(config), n_(params.n), c_(params.c) {
    cfg_.validate();
    params.validate();
    net.validate();
    if (net.N != params.N) throw std::invalid_argument("BpEngine: N mismatch between network and params");
    if ((model == Model::constrained || model == Model::correlated) && L_ < 2)
        throw std::invalid_argument("BpEngine: multiplex models need L >= 2");

    build_graphs(net);
    intra_.resize(L_);
    for (int l = 0; l < L_; ++l) intra_[l].assign(static_cast<size_t>(2) * graphs_[l].E * q_, 0.0);
    if (model_ == Model::constrained)
        inter_.assign(static_cast<size_t>(L_) * L_ * N_ * N_ * q_, 0.0);
    if (model_ == Model::correlated)
        corr_.assign(static_cast<size_t>(L_) * L_ * N_ * q_, 0.0);
    beliefs_.assign(static_cast<size_t>(N_) * L_ * q_, 0.0);
    fields_.assign(static_cast<size_t>(L_) * q_, 0.0);
    prior_field_.assign(static_cast<size_t>(L_) * q_, 0.0);
    if (model_ == Model::constrained) {
        factor_pool_.resize(static_cast<size_t>(N_ - 1) * (L_ - 1));
        std::iota(factor_pool_.begin(), factor_pool_.end(), 0);
    }
    scratch_w_.resize(q_);
    scratch_t_.resize(q_);
    scratch_f_.resize(q_);
    rng_.seed(cfg_.rng_seed);
}

void BpEngine::build_graphs(const MultiplexNetwork& net) {
    graphs_.resize(L_);
    for (int l = 0; l < L_; ++l) {
        LayerGraph& g = graphs_[l];
        g.E = net.edge_count(l);
        g.eu.resize(g.E);
        g.ev.resize(g.E);
        std::vector<int> deg(N_, 0);
        for (int k = 0; k < g.E; ++k) {
            auto [u, v] = net.layers[l][k];
            g.eu[k] = u;
            g.ev[k] = v;
            ++deg[u];
            ++deg[v];
        }
        g.off.assign(N_ + 1, 0);
        for (int i = 0; i < N_; ++i) g.off[i + 1] = g.off[i] + deg[i];
        g.nbr.resize(g.off[N_]);
        g.in_msg.resize(g.off[N_]);
        g.out_msg.resize(g.off[N_]);
        std::vector<int> pos(g.off.begin(), g.off.end() - 1);
        for (int k = 0; k < g.E; ++k) {
            int u = g.eu[k], v = g.ev[k];
            g.nbr[pos[u]] = v;
            g.out_msg[pos[u]] = 2 * k;     // u -> v
            g.in_msg[pos[u]] = 2 * k + 1;  // v -> u
            ++pos[u];
            g.nbr[pos[v]] = u;
            g.out_msg[pos[v]] = 2 * k + 1;
            g.in_msg[pos[v]] = 2 * k;
            ++pos[v];
        }
    }
}

double* BpEngine::intra_message(int l, int i, int j) {
    LayerGraph& g = graphs_[l];
    for (int idx = g.off[i]; idx < g.off[i + 1]; ++idx)
        if (g.nbr[idx] == j) return intra_[l].data() + static_cast<size_t>(g.out_msg[idx]) * q_;
    return nullptr;
}

double* BpEngine::inter_message(int l, int lp, int i, int j) {
    return inter_.data() +
           (((static_cast<size_t>(l) * L_ + lp) * N_ + i) * N_ + j) * q_;
}

double* BpEngine::corr_message(int l, int lp, int i) {
    return corr_.data() + ((static_cast<size_t>(l) * L_ + lp) * N_ + i) * q_;
}

std::vector<double> BpEngine::field(int l) const {
    return {fields_.begin() + static_cast<size_t>(l) * q_, fields_.begin() + static_cast<size_t>(l + 1) * q_};
}

void BpEngine::init_state() {
    auto fill_random_simplex = [&](double* m) {
        double sum = 0;
        for (int a = 0; a < q_; ++a) {
            double u = std::uniform_real_distribution<double>(-1.0, 1.0)(rng_);
            m[a] = std::max(1.0 / q_ + cfg_.init_noise * u, 1e-12);
            sum += m[a];
        }
        for (int a = 0; a < q_; ++a) m[a] /= sum;
    };
    for (int l = 0; l < L_; ++l)
        for (int d = 0; d < 2 * graphs_[l].E; ++d)
            fill_random_simplex(intra_[l].data() + static_cast<size_t>(d) * q_);
    if (model_ == Model::constrained)
        for (int l = 0; l < L_; ++l)
            for (int lp = 0; lp < L_; ++lp) {
                if (lp == l) continue;
                for (int i = 0; i < N_; ++i)
                    for (int j = 0; j < N_; ++j) {
                        if (j == i) continue;
                        fill_random_simplex(inter_message(l, lp, i, j));
                    }
            }
    if (model_ == Model::correlated)
        for (int l = 0; l < L_; ++l)
            for (int lp = 0; lp < L_; ++lp) {
                if (lp == l) continue;
                for (int i = 0; i < N_; ++i) fill_random_simplex(corr_message(l, lp, i));
            }
    for (int i = 0; i < N_; ++i)
        for (int l = 0; l < L_; ++l) fill_random_simplex(belief(i, l));
    recompute_all_fields();
    counts_ = SweepCounts{};
}

void BpEngine::update_external_field(int l) {
    // h_a = (1/N) sum_k sum_b c_{b,a} b^k_b
    std::vector<double>& bsum = scratch_t_;
    std::fill(bsum.begin(), bsum.end(), 0.0);
    for (int i = 0; i < N_; ++i) {
        const double* b = belief(i, l);
        for (int a = 0; a < q_; ++a) bsum[a] += b[a];
    }
    for (int a = 0; a < q_; ++a) {
        double h = 0;
        for (int b = 0; b < q_; ++b) h += c_[static_cast<size_t>(b) * q_ + a] * bsum[b];
        h /= N_;
        fields_[static_cast<size_t>(l) * q_ + a] = h;
        prior_field_[static_cast<size_t>(l) * q_ + a] = n_[a] * std::exp(-h);
    }
}

void BpEngine::recompute_all_fields() {
    for (int l = 0; l < L_; ++l) update_external_field(l);
}

void BpEngine::neighborhood_product(int l, int i, int exclude_nbr, double* w) {
    const LayerGraph& g = graphs_[l];
    const double* msgs = intra_[l].data();
    int since_rescale = 0;
    for (int idx = g.off[i]; idx < g.off[i + 1]; ++idx) {
        int k = g.nbr[idx];
        if (k == exclude_nbr) continue;
        const double* m = msgs + static_cast<size_t>(g.in_msg[idx]) * q_;
        for (int a = 0; a < q_; ++a) {
            const double* crow = c_.data() + static_cast<size_t>(a) * q_;
            double t = 0;
            for (int b = 0; b < q_; ++b) t += crow[b] * m[b];
            w[a] *= t;
        }
        if (++since_rescale == kRescaleStride) {
            since_rescale = 0;
            double mx = *std::max_element(w, w + q_);
            if (mx > 0 && mx < kRescaleFloor)
                for (int a = 0; a < q_; ++a) w[a] /= mx;
        }
    }
}

// Sum over the three other variables of the factor joining (i,j) across
// (l,lp), weighted by the constraint, toward i(l). Uses the closed form of
// the f_check pass set; O(q) per call. Verified against the brute-force
// triple sum in tests.
void BpEngine::factor_contribution(int l, int lp, int i, int j, double* f) const {
    const double* m_jl = inter_.data() + (((static_cast<size_t>(l) * L_ + lp) * N_ + j) * N_ + i) * q_;
    const double* m_ilp = inter_.data() + (((static_cast<size_t>(lp) * L_ + l) * N_ + i) * N_ + j) * q_;
    const double* m_jlp = inter_.data() + (((static_cast<size_t>(lp) * L_ + l) * N_ + j) * N_ + i) * q_;
    double s1 = 1.0;
    for (int a = 0; a < q_; ++a) s1 -= m_jl[a] * m_ilp[a];
    const double dw = cfg_.w_pass - cfg_.w_fail;
    for (int a = 0; a < q_; ++a) {
        double same = m_jl[a] * (m_ilp[a] * m_jlp[a] + (1.0 - m_ilp[a]) * (1.0 - m_jlp[a]));
        double diff = (1.0 - m_jlp[a]) * (s1 - m_jl[a] * (1.0 - m_ilp[a]));
        double p = same + diff;
        if (p < 0) p = 0;
        f[a] = cfg_.w_fail + dw * p;
        if (f[a] < 0) f[a] = 0;
    }
}

int BpEngine::sample_count(int population) const {
    if (population <= 0) return 0;
    int k = static_cast<int>(std::llround(cfg_.n_sample * population));
    return std::clamp(k, 1, population);
}

void BpEngine::factor_product(int i, int l, int exclude_j, int exclude_lp, double* w) {
    // During an alternating pair block, factors toward frozen layers still
    // enter the product (their messages are constants, not absent).
    std::vector<int>* pool = &factor_pool_;
    const int M = static_cast<int>(pool->size());
    if (M == 0) return;
    const bool excluding = exclude_j >= 0;
    int dest_slot = -1;
    if (excluding) {
        int j_raw = exclude_j > i ? exclude_j - 1 : exclude_j;
        int lp_raw = exclude_lp > l ? exclude_lp - 1 : exclude_lp;
        dest_slot = j_raw * (L_ - 1) + lp_raw;
    }
    int k = sample_count(excluding ? M - 1 : M);
    if (k == 0) return;
    int draw = std::min(k + (excluding ? 1 : 0), M);
    if (draw < M) {
        for (int t = 0; t < draw; ++t) {
            int r = t + static_cast<int>(std::uniform_int_distribution<int>(0, M - 1 - t)(rng_));
            std::swap((*pool)[t], (*pool)[r]);
        }
    }
    double* f = scratch_f_.data();
    int used = 0, since_rescale = 0;
    for (int t = 0; t < draw && used < k; ++t) {
        int slot = (*pool)[t];
        if (slot == dest_slot) continue;
        int j_raw = slot / (L_ - 1);
        int lp_raw = slot % (L_ - 1);
        int j = j_raw >= i ? j_raw + 1 : j_raw;
        int lp = lp_raw >= l ? lp_raw + 1 : lp_raw;
        factor_contribution(l, lp, i, j, f);
        for (int a = 0; a < q_; ++a) w[a] *= f[a];
        ++used;
        if (++since_rescale == kRescaleStride) {
            since_rescale = 0;
            double mx = *std::max_element(w, w + q_);
            if (mx > 0 && mx < kRescaleFloor)
                for (int a = 0; a < q_; ++a) w[a] /= mx;
        }
    }
}

void BpEngine::corr_chain_product(int i, int l, int exclude_lp, double* w) {
    if (q_ < 2) return;
    const double base = (1.0 - cfg_.p_same) / (q_ - 1);
    const double slope = cfg_.p_same - base;
    for (int lp = 0; lp < L_; ++lp) {
        if (lp == l || lp == exclude_lp) continue;
        const double* m = corr_.data() + ((static_cast<size_t>(lp) * L_ + l) * N_ + i) * q_;
        for (int a = 0; a < q_; ++a) w[a] *= base + slope * m[a];
    }
}

void BpEngine::normalize_store(double* target, const double* w, double* conv) {
    double sum = 0;
    bool ok = true;
    for (int a = 0; a < q_; ++a) {
        if (!std::isfinite(w[a])) ok = false;
        sum += w[a];
    }
    const double d = cfg_.damping;
    double diff = 0;
    if (!ok || sum <= 0) {
        for (int a = 0; a < q_; ++a) {
            double nv = (1.0 - d) / q_ + d * target[a];
            diff += std::abs(nv - target[a]);
            target[a] = nv;
        }
    } else {
        for (int a = 0; a < q_; ++a) {
            double nv = (1.0 - d) * (w[a] / sum) + d * target[a];
            diff += std::abs(nv - target[a]);
            target[a] = nv;
        }
    }
    if (conv) *conv += diff;
}

void BpEngine::update_intra_message(int l, int i, int j, int msg_idx, double& conv) {
    double* w = scratch_w_.data();
    const double* pf = prior_field_.data() + static_cast<size_t>(l) * q_;
    std::copy(pf, pf + q_, w);
    neighborhood_product(l, i, j, w);
    if (model_ == Model::constrained) factor_product(i, l, -1, -1, w);
    if (model_ == Model::correlated) corr_chain_product(i, l, -1, w);
    normalize_store(intra_[l].data() + static_cast<size_t>(msg_idx) * q_, w, &conv);
    ++counts_.intra;
}

void BpEngine::update_inter_message(int l, int lp, int i, int j, double& conv) {
    double* w = scratch_w_.data();
    const double* pf = prior_field_.data() + static_cast<size_t>(l) * q_;
    std::copy(pf, pf + q_, w);
    neighborhood_product(l, i, -1, w);
    factor_product(i, l, j, lp, w);
    normalize_store(inter_message(l, lp, i, j), w, &conv);
    ++counts_.inter;
}

void BpEngine::update_belief(int i, int l) {
    double* w = scratch_w_.data();
    const double* pf = prior_field_.data() + static_cast<size_t>(l) * q_;
    std::copy(pf, pf + q_, w);
    neighborhood_product(l, i, -1, w);
    if (model_ == Model::constrained) factor_product(i, l, -1, -1, w);
    if (model_ == Model::correlated) corr_chain_product(i, l, -1, w);
    double save_damping = cfg_.damping;
    cfg_.damping = 0;
    normalize_store(belief(i, l), w, nullptr);
    cfg_.damping = save_damping;
}

void BpEngine::layer_block(int l, bool restrict_pair, int pair_other, double& conv) {
    const LayerGraph& g = graphs_[l];
    edge_order_.resize(N_);
    std::iota(edge_order_.begin(), edge_order_.end(), 0);
    if (cfg_.schedule == Schedule::random_order) {
        for (int t = N_ - 1; t > 0; --t) {
            int r = static_cast<int>(std::uniform_int_distribution<int>(0, t)(rng_));
            std::swap(edge_order_[t], edge_order_[r]);
        }
    }
    // Per-node updates with a running external field: refresh each node's
    // belief right after its outgoing messages and fold the belief change
    // into h immediately. A once-per-sweep field lags behind the messages
    // and lets dense graphs collapse onto a single label before the field
    // can push back.
    std::vector<double> old_b(q_);
    for (int i : edge_order_) {
        for (int idx = g.off[i]; idx < g.off[i + 1]; ++idx)
            update_intra_message(l, i, g.nbr[idx], g.out_msg[idx], conv);
        std::copy(belief(i, l), belief(i, l) + q_, old_b.begin());
        update_belief(i, l);
        const double* b = belief(i, l);
        for (int a = 0; a < q_; ++a) {
            double dh = 0;
            for (int bb = 0; bb < q_; ++bb)
                dh += c_[static_cast<size_t>(bb) * q_ + a] * (b[bb] - old_b[bb]);
            double& h = fields_[static_cast<size_t>(l) * q_ + a];
            h += dh / N_;
            prior_field_[static_cast<size_t>(l) * q_ + a] = n_[a] * std::exp(-h);
        }
    }
    if (model_ == Model::constrained) {
        for (int lp = 0; lp < L_; ++lp) {
            if (lp == l) continue;
            if (restrict_pair && lp != pair_other) continue;
            for (int i = 0; i < N_; ++i)
                for (int j = 0; j < N_; ++j) {
                    if (j == i) continue;
                    update_inter_message(l, lp, i, j, conv);
                }
        }
    }
    if (model_ == Model::correlated) {
        for (int lp = 0; lp < L_; ++lp) {
            if (lp == l) continue;
            for (int i = 0; i < N_; ++i) {
                double* w = scratch_w_.data();
                const double* pf = prior_field_.data() + static_cast<size_t>(l) * q_;
                std::copy(pf, pf + q_, w);
                neighborhood_product(l, i, -1, w);
                corr_chain_product(i, l, lp, w);
                normalize_store(corr_message(l, lp, i), w, &conv);
                ++counts_.inter;
            }
        }
    }
    update_external_field(l); // exact refresh; the incremental h drifts
}

void BpEngine::trailing_inter_pass(int l, int lp, double& conv) {
    for (int i = 0; i < N_; ++i)
        for (int j = 0; j < N_; ++j) {
            if (j == i) continue;
            update_inter_message(l, lp, i, j, conv);
        }
}

double BpEngine::sweep() {
    counts_ = SweepCounts{};
    double conv = 0;
    for (int l = 0; l < L_; ++l) layer_block(l, false, -1, conv);
    if (model_ == Model::constrained)
        for (int l = 0; l < L_; ++l)
            for (int lp = 0; lp < L_; ++lp) {
                if (lp == l) continue;
                trailing_inter_pass(l, lp, conv);
            }
    return conv;
}

double BpEngine::pair_sweep(int l1, int l2) {
    if (model_ != Model::constrained)
        throw std::logic_error("pair_sweep: constrained model only");
    counts_ = SweepCounts{};
    double conv = 0;
    layer_block(l1, true, l2, conv);
    layer_block(l2, true, l1, conv);
    trailing_inter_pass(l1, l2, conv);
    trailing_inter_pass(l2, l1, conv);
    return conv;
}

DetectionResult BpEngine::extract_result(bool converged, int sweeps, double conv) const {
    DetectionResult r;
    r.labels = Labeling(N_, L_, q_);
    for (int i = 0; i < N_; ++i)
        for (int l = 0; l < L_; ++l) {
            const double* b = beliefs_.data() + (static_cast<size_t>(i) * L_ + l) * q_;
            int best = 0;
            for (int a = 1; a < q_; ++a)
                if (b[a] > b[best]) best = a;
            r.labels.at(i, l) = best + 1;
        }
    r.beliefs = beliefs_;
    r.converged = converged;
    r.sweeps_used = sweeps;
    r.final_conv = conv;
    return r;
}

DetectionResult BpEngine::run() {
    init_state();
    double conv = 0;
    int t = 0;
    bool converged = false;
    while (t < cfg_.t_max) {
        ++t;
        conv = sweep();
        if (conv <= cfg_.conv_tol) {
            converged = true;
            break;
        }
    }
    return extract_result(converged, t, conv);
}

DetectionResult BpEngine::run_alternating(std::vector<std::pair<int, int>> pair_schedule) {
    if (model_ != Model::constrained)
        throw std::logic_error("run_alternating: constrained model only");
    if (pair_schedule.empty())
        for (int l1 = 0; l1 < L_; ++l1)
            for (int l2 = l1 + 1; l2 < L_; ++l2) pair_schedule.emplace_back(l1, l2);
    init_state();
    double round_conv = 0;
    int t = 0;
    bool converged = false;
    while (t < cfg_.t_max) {
        ++t;
        round_conv = 0;
        for (auto [l1, l2] : pair_schedule) {
            double conv = 0;
            for (int s = 0; s < cfg_.alt_inner_sweeps; ++s) {
                conv = pair_sweep(l1, l2);
                if (conv <= cfg_.conv_tol) break;
            }
            round_conv += conv;
        }
        if (round_conv <= cfg_.conv_tol) {
            converged = true;
            break;
        }
    }
    return extract_result(converged, t, round_conv);
}

double BpEngine::max_normalization_error() const {
    double err = 0;
    auto check = [&](const double* m) {
        double s = 0;
        for (int a = 0; a < q_; ++a) s += m[a];
        err = std::max(err, std::abs(s - 1.0));
    };
    for (int l = 0; l < L_; ++l)
        for (int d = 0; d < 2 * graphs_[l].E; ++d) check(intra_[l].data() + static_cast<size_t>(d) * q_);
    if (model_ == Model::constrained)
        for (int l = 0; l < L_; ++l)
            for (int lp = 0; lp < L_; ++lp) {
                if (lp == l) continue;
                for (int i = 0; i < N_; ++i)
                    for (int j = 0; j < N_; ++j) {
                        if (j == i) continue;
                        check(inter_.data() +
                              (((static_cast<size_t>(l) * L_ + lp) * N_ + i) * N_ + j) * q_);
                    }
            }
    for (size_t off = 0; off + q_ <= beliefs_.size(); off += q_) check(beliefs_.data() + off);
    return err;
}

} // namespace mpx
