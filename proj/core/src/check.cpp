#include "mpxbp/check.hpp"

#include <stdexcept>

namespace mpx {

static void require_label(Label x, int q) {
    if (x < 1 || x > q) throw std::out_of_range("f_check: label out of range");
}

bool f_check(Label alpha, Label beta, Label gamma, Label delta, int q) {
    require_label(alpha, q);
    require_label(beta, q);
    require_label(gamma, q);
    require_label(delta, q);
    if (alpha == beta) {
        if (gamma == alpha && delta == alpha) return true;
        return gamma != alpha && delta != alpha;
    }
    return gamma != beta && delta != alpha;
}

CheckTable build_check_table(int q, double w_fail, double w_pass) {
    if (q < 1) throw std::invalid_argument("build_check_table: q must be >= 1");
    CheckTable table;
    table.q = q;
    table.w_fail = w_fail;
    table.w_pass = w_pass;
    table.valid.resize(static_cast<size_t>(q) * q * q * q);
    for (Label a = 1; a <= q; ++a)
        for (Label b = 1; b <= q; ++b)
            for (Label c = 1; c <= q; ++c)
                for (Label d = 1; d <= q; ++d)
                    table.valid[table.index(a, b, c, d)] = f_check(a, b, c, d, q) ? 1 : 0;
    return table;
}

int CheckTable::pass_count() const {
    int count = 0;
    for (std::uint8_t v : valid) count += v;
    return count;
}

bool f_check_extended(std::span<const Label> t_i, std::span<const Label> t_j, int q) {
    if (t_i.size() != t_j.size()) throw std::invalid_argument("f_check_extended: length mismatch");
    const int L = static_cast<int>(t_i.size());
    for (int l = 0; l < L; ++l)
        for (int lp = 0; lp < L; ++lp) {
            if (lp == l) continue;
            if (!f_check(t_i[l], t_j[l], t_i[lp], t_j[lp], q)) return false;
        }
    return true;
}

std::optional<WppWitness> wpp_check_global(const Labeling& labeling) {
    const int N = labeling.N;
    const int L = labeling.L;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int l = 0; l < L; ++l)
                for (int k = 0; k < L; ++k) {
                    Label til = labeling.at(i, l);
                    if (til == kNoLabel) continue;
                    if (til == labeling.at(j, k) && labeling.at(i, k) != labeling.at(j, k))
                        return WppWitness{i, j, l, k};
                }
    return std::nullopt;
}

} // namespace mpx
