#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mpx {

// Community labels are 1..q; 0 means "no label" (node outside every
// community present in that layer).
using Label = int;
inline constexpr Label kNoLabel = 0;

// SBM parameters with the affinity matrix in rescaled form c_ab = N * p_ab.
struct SbmParams {
    int q = 0;
    int N = 0;
    std::vector<double> n; // community size fractions, length q
    std::vector<double> c; // q x q symmetric, row-major

    double affinity(int a, int b) const { return c[static_cast<size_t>(a) * q + b]; }
    double& affinity(int a, int b) { return c[static_cast<size_t>(a) * q + b]; }

    // Throws std::invalid_argument on malformed parameters.
    void validate() const;
};

// Planted-partition benchmark parameterization: c_in on the diagonal,
// c_out = epsilon * c_in elsewhere, scaled to hit a target mean degree
// for q equal-sized communities.
struct BenchmarkAffinity {
    double c_in = 0;
    double c_out = 0;
    double epsilon = 0;
    double average_degree = 0;

    static BenchmarkAffinity from_epsilon_degree(double epsilon, double average_degree,
                                                 int q_equal);
    SbmParams expand(int q, int N) const;
    void validate() const;
};

// Undirected multiplex network: one edge set per layer over nodes 0..N-1.
// Edges are stored once as (i, j) with i < j, sorted.
struct MultiplexNetwork {
    int N = 0;
    int L = 0;
    std::vector<std::vector<std::pair<int, int>>> layers;

    int edge_count(int l) const { return static_cast<int>(layers[l].size()); }
    void validate() const;
};

// Per-node per-layer labels; t(i, l) in {1..q} or kNoLabel.
struct Labeling {
    int N = 0;
    int L = 0;
    int q = 0;
    std::vector<Label> t; // N * L, row-major by node

    Labeling() = default;
    Labeling(int N_, int L_, int q_) : N(N_), L(L_), q(q_), t(static_cast<size_t>(N_) * L_, kNoLabel) {}

    Label at(int i, int l) const { return t[static_cast<size_t>(i) * L + l]; }
    Label& at(int i, int l) { return t[static_cast<size_t>(i) * L + l]; }
    void validate() const;
};

// Communities as node sets plus a per-layer presence list (indices into
// `communities`). Node lists and presence lists are kept sorted.
struct CommunityStructure {
    int N = 0;
    int L = 0;
    std::vector<std::vector<int>> communities;
    std::vector<std::vector<int>> presence;

    int community_count() const { return static_cast<int>(communities.size()); }
    // WPP: communities present in one layer must be pairwise disjoint.
    // Throws std::invalid_argument when violated.
    void validate() const;
    // True when every community is present in at least one layer.
    bool observable() const;
};

struct CorrelatedParams {
    double p_same = 1.0;
    void validate() const;
};

} // namespace mpx
