#include "mpxbp/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mpx {

ScoreReport normalized_agreement(const Labeling& truth, const Labeling& predicted,
                                 const std::vector<double>& n) {
    if (truth.N != predicted.N || truth.L != predicted.L || truth.q != predicted.q)
        throw std::invalid_argument("normalized_agreement: shape mismatch");
    const int q = truth.q;
    if (q > 8)
        throw std::invalid_argument("normalized_agreement: q > 8 not supported (factorial search)");
    if (static_cast<int>(n.size()) != q)
        throw std::invalid_argument("normalized_agreement: n must have q entries");

    // confusion over non-empty truth copies
    std::vector<long long> conf(static_cast<size_t>(q) * q, 0);
    long long total = 0;
    for (int i = 0; i < truth.N; ++i)
        for (int l = 0; l < truth.L; ++l) {
            Label a = truth.at(i, l);
            if (a == kNoLabel) continue;
            Label b = predicted.at(i, l);
            if (b == kNoLabel) throw std::invalid_argument("normalized_agreement: predicted label missing");
            ++conf[static_cast<size_t>(a - 1) * q + (b - 1)];
            ++total;
        }
    if (total == 0) throw std::invalid_argument("normalized_agreement: no labeled truth copies");

    std::vector<int> perm(q);
    std::iota(perm.begin(), perm.end(), 0);
    long long best = -1;
    std::vector<int> best_perm = perm;
    do {
        long long hits = 0;
        for (int a = 0; a < q; ++a) hits += conf[static_cast<size_t>(a) * q + perm[a]];
        if (hits > best) {
            best = hits;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    ScoreReport report;
    report.agreement = static_cast<double>(best) / total;
    report.best_permutation.resize(q);
    for (int a = 0; a < q; ++a) report.best_permutation[a] = best_perm[a] + 1;
    double max_n = *std::max_element(n.begin(), n.end());
    if (1.0 - max_n > 1e-12)
        report.q_norm = std::max(0.0, (report.agreement - max_n) / (1.0 - max_n));
    else
        report.q_norm = report.agreement >= 1.0 - 1e-12 ? 1.0 : 0.0;
    return report;
}

bool wpp_majority_trial_check(const Labeling& predicted,
                              const std::vector<PlantedCluster>& clusters) {
    const int q = predicted.q;
    Labeling cluster_labels(predicted.N, predicted.L, q);
    for (const auto& cluster : clusters) {
        if (cluster.nodes.empty()) throw std::invalid_argument("wpp_majority_trial_check: empty cluster");
        if (cluster.layer < 0 || cluster.layer >= predicted.L)
            throw std::invalid_argument("wpp_majority_trial_check: layer out of range");
        std::vector<int> votes(q + 1, 0);
        for (int i : cluster.nodes) ++votes[predicted.at(i, cluster.layer)];
        int best = 0;
        bool tie = false;
        for (int a = 1; a <= q; ++a) {
            if (votes[a] > votes[best]) {
                best = a;
                tie = false;
            } else if (best != 0 && votes[a] == votes[best]) {
                tie = true;
            }
        }
        if (best == 0 || tie) return false;
        for (int i : cluster.nodes) cluster_labels.at(i, cluster.layer) = best;
    }
    return !wpp_check_global(cluster_labels).has_value();
}

long long local_constraint_score(const Labeling& predicted, const CheckTable& table) {
    if (table.q != predicted.q) throw std::invalid_argument("local_constraint_score: q mismatch");
    long long count = 0;
    for (int i = 0; i < predicted.N; ++i)
        for (int j = i + 1; j < predicted.N; ++j)
            for (int l = 0; l < predicted.L; ++l)
                for (int k = l + 1; k < predicted.L; ++k)
                    if (table.pass(predicted.at(i, l), predicted.at(j, l), predicted.at(i, k),
                                   predicted.at(j, k)))
                        ++count;
    return count;
}

long long local_constraint_score(const Labeling& predicted) {
    return local_constraint_score(predicted, build_check_table(predicted.q));
}

double cross_layer_match_fraction(const Labeling& predicted, int l1, int l2) {
    int hits = 0;
    for (int i = 0; i < predicted.N; ++i)
        if (predicted.at(i, l1) == predicted.at(i, l2)) ++hits;
    return static_cast<double>(hits) / predicted.N;
}

} // namespace mpx
