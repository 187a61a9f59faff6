#include "mpxbp/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mpx {

void SbmParams::validate() const {
    if (q < 1) throw std::invalid_argument("SbmParams: q must be >= 1");
    if (N < 1) throw std::invalid_argument("SbmParams: N must be >= 1");
    if (static_cast<int>(n.size()) != q) throw std::invalid_argument("SbmParams: n must have q entries");
    if (static_cast<int>(c.size()) != q * q) throw std::invalid_argument("SbmParams: c must be q x q");
    double sum = 0;
    for (double na : n) {
        if (na < 0) throw std::invalid_argument("SbmParams: n_a must be >= 0");
        sum += na;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("SbmParams: sum of n must be 1");
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            double cab = affinity(a, b);
            if (std::abs(cab - affinity(b, a)) > 1e-12)
                throw std::invalid_argument("SbmParams: c must be symmetric");
            if (cab < 0 || cab > N)
                throw std::invalid_argument("SbmParams: c_ab/N must lie in [0,1]");
        }
    }
}

BenchmarkAffinity BenchmarkAffinity::from_epsilon_degree(double epsilon, double average_degree,
                                                         int q_equal) {
    if (epsilon < 0 || epsilon > 1) throw std::invalid_argument("BenchmarkAffinity: epsilon must be in [0,1]");
    if (average_degree <= 0) throw std::invalid_argument("BenchmarkAffinity: average_degree must be > 0");
    if (q_equal < 1) throw std::invalid_argument("BenchmarkAffinity: q_equal must be >= 1");
    // mean degree for q equal communities: (c_in + (q-1) c_out) / q
    BenchmarkAffinity aff;
    aff.epsilon = epsilon;
    aff.average_degree = average_degree;
    aff.c_in = q_equal * average_degree / (1.0 + (q_equal - 1) * epsilon);
    aff.c_out = epsilon * aff.c_in;
    return aff;
}

SbmParams BenchmarkAffinity::expand(int q, int N) const {
    validate();
    SbmParams p;
    p.q = q;
    p.N = N;
    p.n.assign(q, 1.0 / q);
    p.c.assign(static_cast<size_t>(q) * q, c_out);
    for (int a = 0; a < q; ++a) p.affinity(a, a) = c_in;
    p.validate();
    return p;
}

void BenchmarkAffinity::validate() const {
    if (c_in < 0 || c_out < 0) throw std::invalid_argument("BenchmarkAffinity: negative affinity");
    if (c_in > 0 && std::abs(epsilon - c_out / c_in) > 1e-9)
        throw std::invalid_argument("BenchmarkAffinity: epsilon != c_out/c_in");
}

void MultiplexNetwork::validate() const {
    if (N < 1) throw std::invalid_argument("MultiplexNetwork: N must be >= 1");
    if (L < 1) throw std::invalid_argument("MultiplexNetwork: L must be >= 1");
    if (static_cast<int>(layers.size()) != L) throw std::invalid_argument("MultiplexNetwork: wrong layer count");
    for (int l = 0; l < L; ++l) {
        const auto& edges = layers[l];
        for (size_t k = 0; k < edges.size(); ++k) {
            auto [i, j] = edges[k];
            if (i < 0 || j < 0 || i >= N || j >= N)
                throw std::invalid_argument("MultiplexNetwork: endpoint out of range");
            if (i == j) throw std::invalid_argument("MultiplexNetwork: self-loop");
            if (i > j) throw std::invalid_argument("MultiplexNetwork: edges must be stored as (i<j)");
            if (k > 0 && edges[k] <= edges[k - 1])
                throw std::invalid_argument("MultiplexNetwork: edges must be sorted and unique");
        }
    }
}

void Labeling::validate() const {
    if (N < 1 || L < 1 || q < 1) throw std::invalid_argument("Labeling: bad dimensions");
    if (t.size() != static_cast<size_t>(N) * L) throw std::invalid_argument("Labeling: wrong size");
    for (Label lab : t) {
        if (lab < 0 || lab > q)
            throw std::invalid_argument("Labeling: label " + std::to_string(lab) + " out of range");
    }
}

void CommunityStructure::validate() const {
    if (N < 1 || L < 1) throw std::invalid_argument("CommunityStructure: bad dimensions");
    if (static_cast<int>(presence.size()) != L)
        throw std::invalid_argument("CommunityStructure: presence must have L entries");
    for (const auto& comm : communities) {
        for (size_t k = 0; k < comm.size(); ++k) {
            if (comm[k] < 0 || comm[k] >= N)
                throw std::invalid_argument("CommunityStructure: node out of range");
            if (k > 0 && comm[k] <= comm[k - 1])
                throw std::invalid_argument("CommunityStructure: community nodes must be sorted and unique");
        }
    }
    int Q = community_count();
    for (int l = 0; l < L; ++l) {
        std::vector<char> seen(static_cast<size_t>(N), 0);
        for (int a : presence[l]) {
            if (a < 0 || a >= Q) throw std::invalid_argument("CommunityStructure: presence index out of range");
            for (int v : communities[a]) {
                if (seen[v])
                    throw std::invalid_argument(
                        "CommunityStructure: overlapping communities in layer " + std::to_string(l));
                seen[v] = 1;
            }
        }
    }
}

bool CommunityStructure::observable() const {
    std::vector<char> present(communities.size(), 0);
    for (const auto& pl : presence)
        for (int a : pl) present[a] = 1;
    for (char p : present)
        if (!p) return false;
    return true;
}

void CorrelatedParams::validate() const {
    if (p_same < 0 || p_same > 1) throw std::invalid_argument("CorrelatedParams: p_same must be in [0,1]");
}

} // namespace mpx
