#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mpxbp/check.hpp"
#include "mpxbp/types.hpp"

namespace mpx {

struct GeneratedLayer {
    std::vector<std::pair<int, int>> edges;
    std::vector<Label> labels; // length N, values 1..q
};

// Single-layer SBM: labels ~ n, each unordered pair connected with
// probability c_{t_i t_j} / N. Deterministic in the seed.
GeneratedLayer generate_single_layer(const SbmParams& params, std::uint64_t seed);

// Multiplex SBM with planted community structure. Labels come from the
// structure (kNoLabel outside every present community); each layer's edges
// are an independent SBM draw given that layer's labels. Unlabeled nodes
// connect with the background probability c_out / N.
std::pair<MultiplexNetwork, Labeling> generate_multiplex_wpp(const CommunityStructure& structure,
                                                             const BenchmarkAffinity& affinity,
                                                             std::uint64_t seed);

// Correlated multiplex model: layer-0 labels ~ n; each later layer keeps
// the previous label with probability p_same, otherwise resamples
// uniformly among the other q-1 labels. Edges per layer as independent SBM.
std::pair<MultiplexNetwork, Labeling> generate_correlated(const SbmParams& params, double p_same,
                                                          int L, std::uint64_t seed);

struct WppViolationError : std::runtime_error {
    WppWitness witness;
    explicit WppViolationError(const WppWitness& w);
};

// Reconstructs communities C_a = {v_i | exists l: t_i(l) = a} and per-layer
// presence sets. Throws WppViolationError (with the smallest witness) when
// the labeling is not WPP-consistent.
CommunityStructure labeling_to_structure(const Labeling& labeling);

// Natural labeling of a structure: t_i(l) = a iff i in C_a and C_a present
// in layer l; kNoLabel otherwise.
Labeling structure_to_labeling(const CommunityStructure& structure);

} // namespace mpx
