#pragma once

#include <vector>

#include "mpxbp/check.hpp"
#include "mpxbp/types.hpp"

namespace mpx {

struct ScoreReport {
    double agreement = 0;       // best-permutation overlap on non-empty truth copies
    double q_norm = 0;          // normalized agreement Q, clamped at 0
    std::vector<int> best_permutation; // pi[a-1] = predicted label mapped onto truth label a
    bool wpp_majority_pass = false;
    long long local_pass_count = 0;
};

// Normalized agreement with a single global label permutation across all
// layers. Truth copies labeled kNoLabel are skipped. q must be <= 8.
ScoreReport normalized_agreement(const Labeling& truth, const Labeling& predicted,
                                 const std::vector<double>& n);

struct PlantedCluster {
    int layer = 0;
    std::vector<int> nodes;
};

// Majority vote per planted cluster (ties fail), then a global WPP check of
// the resulting cluster labels.
bool wpp_majority_trial_check(const Labeling& predicted, const std::vector<PlantedCluster>& clusters);

// Number of (unordered node pair, unordered layer pair) tuples whose labels
// pass f_check. Predicted labels must be free of kNoLabel.
long long local_constraint_score(const Labeling& predicted);
long long local_constraint_score(const Labeling& predicted, const CheckTable& table);

// Fraction of nodes whose MMAP labels agree between the two given layers.
double cross_layer_match_fraction(const Labeling& predicted, int l1, int l2);

} // namespace mpx
