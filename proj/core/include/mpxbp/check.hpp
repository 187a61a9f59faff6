#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mpxbp/types.hpp"

namespace mpx {

// Local WPP constraint on the labels of two nodes i, j in two layers l, l':
//   alpha = t_i(l), beta = t_j(l), gamma = t_i(l'), delta = t_j(l').
// Pass iff
//   alpha == beta: gamma == delta == alpha, or (gamma != alpha and delta != alpha)
//   alpha != beta: gamma != beta and delta != alpha.
// Labels must be in {1..q}; throws std::out_of_range otherwise.
bool f_check(Label alpha, Label beta, Label gamma, Label delta, int q);

// Precomputed q^4 table of f_check with a (w_fail, w_pass) weight pair.
// Immutable after construction; safe for shared reads.
struct CheckTable {
    int q = 0;
    double w_fail = 0.0;
    double w_pass = 1.0;
    std::vector<std::uint8_t> valid; // q^4 entries, index (((a-1)q + b-1)q + c-1)q + d-1

    bool pass(Label alpha, Label beta, Label gamma, Label delta) const {
        return valid[index(alpha, beta, gamma, delta)] != 0;
    }
    double weight(Label alpha, Label beta, Label gamma, Label delta) const {
        return pass(alpha, beta, gamma, delta) ? w_pass : w_fail;
    }
    int pass_count() const;

    size_t index(Label alpha, Label beta, Label gamma, Label delta) const {
        return ((static_cast<size_t>(alpha - 1) * q + (beta - 1)) * q + (gamma - 1)) * q + (delta - 1);
    }
};

CheckTable build_check_table(int q, double w_fail = 0.0, double w_pass = 1.0);

// All-layers constraint: pass iff f_check passes for every layer pair of
// the two nodes' label vectors. Throws on length mismatch or unset labels.
bool f_check_extended(std::span<const Label> t_i, std::span<const Label> t_j, int q);

struct WppWitness {
    int i, j, l, k; // t_i(l) == t_j(k) != 0 but t_i(k) != t_j(k)
};

// Global WPP verifier over a labeling (kNoLabel allowed). Returns the
// lexicographically smallest (i, j, l, k) witness, or nullopt on pass.
std::optional<WppWitness> wpp_check_global(const Labeling& labeling);

} // namespace mpx
