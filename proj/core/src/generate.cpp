#include "mpxbp/generate.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace mpx {

static std::vector<Label> draw_labels(const SbmParams& params, std::mt19937_64& rng) {
    std::discrete_distribution<int> dist(params.n.begin(), params.n.end());
    std::vector<Label> labels(params.N);
    for (int i = 0; i < params.N; ++i) labels[i] = dist(rng) + 1;
    return labels;
}

// Pairwise Bernoulli edges given per-node labels; kNoLabel uses background.
static std::vector<std::pair<int, int>> draw_edges(const std::vector<Label>& labels, int N,
                                                   const SbmParams& params, double background,
                                                   std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            double p;
            if (labels[i] == kNoLabel || labels[j] == kNoLabel)
                p = background / N;
            else
                p = params.affinity(labels[i] - 1, labels[j] - 1) / N;
            if (u(rng) < p) edges.emplace_back(i, j);
        }
    }
    return edges;
}

GeneratedLayer generate_single_layer(const SbmParams& params, std::uint64_t seed) {
    params.validate();
    std::mt19937_64 rng(seed);
    GeneratedLayer out;
    out.labels = draw_labels(params, rng);
    out.edges = draw_edges(out.labels, params.N, params, 0.0, rng);
    return out;
}

std::pair<MultiplexNetwork, Labeling> generate_multiplex_wpp(const CommunityStructure& structure,
                                                             const BenchmarkAffinity& affinity,
                                                             std::uint64_t seed) {
    structure.validate();
    affinity.validate();
    if (!structure.observable())
        throw std::invalid_argument("generate_multiplex_wpp: structure has unobservable communities");

    Labeling labeling = structure_to_labeling(structure);
    const int N = structure.N;
    const int L = structure.L;
    SbmParams params = affinity.expand(std::max(1, labeling.q), N);

    std::mt19937_64 rng(seed);
    MultiplexNetwork net;
    net.N = N;
    net.L = L;
    net.layers.resize(L);
    std::vector<Label> layer_labels(N);
    for (int l = 0; l < L; ++l) {
        for (int i = 0; i < N; ++i) layer_labels[i] = labeling.at(i, l);
        net.layers[l] = draw_edges(layer_labels, N, params, affinity.c_out, rng);
    }
    return {std::move(net), std::move(labeling)};
}

std::pair<MultiplexNetwork, Labeling> generate_correlated(const SbmParams& params, double p_same,
                                                          int L, std::uint64_t seed) {
    params.validate();
    CorrelatedParams{p_same}.validate();
    if (L < 2) throw std::invalid_argument("generate_correlated: L must be >= 2");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int N = params.N;
    const int q = params.q;

    Labeling labeling(N, L, q);
    std::vector<Label> prev = draw_labels(params, rng);
    for (int i = 0; i < N; ++i) labeling.at(i, 0) = prev[i];
    for (int l = 1; l < L; ++l) {
        for (int i = 0; i < N; ++i) {
            Label lab = prev[i];
            if (q > 1 && u(rng) >= p_same) {
                // uniform among the other q-1 labels
                int r = static_cast<int>(u(rng) * (q - 1));
                if (r >= q - 1) r = q - 2;
                lab = (r + 1 >= lab) ? r + 2 : r + 1;
            }
            labeling.at(i, l) = lab;
            prev[i] = lab;
        }
    }

    MultiplexNetwork net;
    net.N = N;
    net.L = L;
    net.layers.resize(L);
    std::vector<Label> layer_labels(N);
    for (int l = 0; l < L; ++l) {
        for (int i = 0; i < N; ++i) layer_labels[i] = labeling.at(i, l);
        net.layers[l] = draw_edges(layer_labels, N, params, 0.0, rng);
    }
    return {std::move(net), std::move(labeling)};
}

WppViolationError::WppViolationError(const WppWitness& w)
    : std::runtime_error("WPP violation at (i=" + std::to_string(w.i) + ", j=" + std::to_string(w.j) +
                         ", l=" + std::to_string(w.l) + ", k=" + std::to_string(w.k) + ")"),
      witness(w) {}

CommunityStructure labeling_to_structure(const Labeling& labeling) {
    labeling.validate();
    if (auto witness = wpp_check_global(labeling)) throw WppViolationError(*witness);

    CommunityStructure s;
    s.N = labeling.N;
    s.L = labeling.L;
    std::vector<std::vector<int>> members(labeling.q);
    std::vector<std::vector<char>> in_layer(labeling.q, std::vector<char>(labeling.L, 0));
    std::vector<std::vector<char>> seen(labeling.q, std::vector<char>(labeling.N, 0));
    for (int i = 0; i < labeling.N; ++i)
        for (int l = 0; l < labeling.L; ++l) {
            Label a = labeling.at(i, l);
            if (a == kNoLabel) continue;
            if (!seen[a - 1][i]) {
                seen[a - 1][i] = 1;
                members[a - 1].push_back(i);
            }
            in_layer[a - 1][l] = 1;
        }

    // keep only non-empty communities, in label order
    std::vector<int> comm_index(labeling.q, -1);
    for (int a = 0; a < labeling.q; ++a) {
        if (members[a].empty()) continue;
        comm_index[a] = s.community_count();
        std::sort(members[a].begin(), members[a].end());
        s.communities.push_back(std::move(members[a]));
    }
    s.presence.resize(labeling.L);
    for (int l = 0; l < labeling.L; ++l)
        for (int a = 0; a < labeling.q; ++a)
            if (in_layer[a][l]) s.presence[l].push_back(comm_index[a]);
    return s;
}

Labeling structure_to_labeling(const CommunityStructure& structure) {
    structure.validate();
    Labeling labeling(structure.N, structure.L, std::max(1, structure.community_count()));
    for (int l = 0; l < structure.L; ++l)
        for (int a : structure.presence[l])
            for (int v : structure.communities[a]) labeling.at(v, l) = a + 1;
    return labeling;
}

} // namespace mpx
