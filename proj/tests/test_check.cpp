#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "mpxbp/check.hpp"

using namespace mpx;

namespace {

// Independent oracle: the pair constraint is exactly "a 2-node, 2-layer
// labeling is partition-consistent", i.e. equal labels anywhere imply the
// two nodes agree in both layers whenever one of them carries that label.
bool pair_oracle(Label alpha, Label beta, Label gamma, Label delta) {
    Label t[2][2] = {{alpha, gamma}, {beta, delta}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l)
                for (int k = 0; k < 2; ++k)
                    if (t[i][l] == t[j][k] && t[i][k] != t[j][k]) return false;
    return true;
}

// Same quantifier condition on a full labeling, written directly.
bool global_oracle(const Labeling& t) {
    for (int i = 0; i < t.N; ++i)
        for (int j = 0; j < t.N; ++j)
            for (int l = 0; l < t.L; ++l)
                for (int k = 0; k < t.L; ++k)
                    if (t.at(i, l) != kNoLabel && t.at(i, l) == t.at(j, k) && t.at(i, k) != t.at(j, k))
                        return false;
    return true;
}

} // namespace

TEST_CASE("pair constraint matches the quantifier oracle for q up to 6") {
    for (int q = 1; q <= 6; ++q) {
        int pass = 0;
        for (Label a = 1; a <= q; ++a)
            for (Label b = 1; b <= q; ++b)
                for (Label c = 1; c <= q; ++c)
                    for (Label d = 1; d <= q; ++d) {
                        bool got = f_check(a, b, c, d, q);
                        CHECK(got == pair_oracle(a, b, c, d));
                        pass += got;
                    }
        if (q == 1) CHECK(pass == 1);
        if (q == 2) CHECK(pass == 6);  // enumerated by the oracle: 6 of 16
        if (q == 3) CHECK(pass == 39); // 39 of 81
    }
}

TEST_CASE("pair constraint rejects out-of-range labels") {
    CHECK_THROWS_AS(f_check(0, 1, 1, 1, 2), std::out_of_range);
    CHECK_THROWS_AS(f_check(1, 3, 1, 1, 2), std::out_of_range);
    CHECK_THROWS_AS(f_check(1, 1, 1, 5, 4), std::out_of_range);
}

TEST_CASE("pair constraint symmetries") {
    std::mt19937 rng(7);
    for (int q = 2; q <= 6; ++q) {
        std::vector<int> perm(q);
        for (int a = 0; a < q; ++a) perm[a] = a + 1;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (Label a = 1; a <= q; ++a)
            for (Label b = 1; b <= q; ++b)
                for (Label c = 1; c <= q; ++c)
                    for (Label d = 1; d <= q; ++d) {
                        bool base = f_check(a, b, c, d, q);
                        CHECK(base == f_check(b, a, d, c, q)); // node swap
                        CHECK(base == f_check(c, d, a, b, q)); // layer swap
                        CHECK(base == f_check(perm[a - 1], perm[b - 1], perm[c - 1], perm[d - 1], q));
                    }
    }
}

TEST_CASE("check table agrees with the function and counts passes") {
    for (int q = 1; q <= 6; ++q) {
        CheckTable table = build_check_table(q, 0.25, 0.75);
        CHECK(table.q == q);
        CHECK(static_cast<int>(table.valid.size()) == q * q * q * q);
        int pass = 0;
        for (Label a = 1; a <= q; ++a)
            for (Label b = 1; b <= q; ++b)
                for (Label c = 1; c <= q; ++c)
                    for (Label d = 1; d <= q; ++d) {
                        bool expect = f_check(a, b, c, d, q);
                        CHECK(table.pass(a, b, c, d) == expect);
                        CHECK(table.weight(a, b, c, d) == (expect ? 0.75 : 0.25));
                        pass += expect;
                    }
        CHECK(table.pass_count() == pass);
    }
    CHECK(build_check_table(2).pass_count() == 6);
    CHECK(build_check_table(3).pass_count() == 39);
}

TEST_CASE("extended constraint equals the conjunction over layer pairs") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        int q = 2 + static_cast<int>(rng() % 3);
        int L = 2 + static_cast<int>(rng() % 3);
        std::vector<Label> ti(L), tj(L);
        for (int l = 0; l < L; ++l) {
            ti[l] = 1 + static_cast<int>(rng() % q);
            tj[l] = 1 + static_cast<int>(rng() % q);
        }
        bool expect = true;
        for (int l = 0; l < L && expect; ++l)
            for (int k = l + 1; k < L && expect; ++k)
                expect = f_check(ti[l], tj[l], ti[k], tj[k], q);
        CHECK(f_check_extended(ti, tj, q) == expect);
    }
}

TEST_CASE("global verifier matches the quantifier oracle, with empty labels") {
    // exhaustive over labelings with values in {0,1,2}, N=3, L=2
    const int N = 3, L = 2, q = 2;
    int total = 1;
    for (int c = 0; c < N * L; ++c) total *= 3;
    for (int code = 0; code < total; ++code) {
        Labeling t(N, L, q);
        int x = code;
        for (int i = 0; i < N; ++i)
            for (int l = 0; l < L; ++l) {
                t.at(i, l) = x % 3;
                x /= 3;
            }
        auto witness = wpp_check_global(t);
        CHECK(!witness.has_value() == global_oracle(t));
    }
}

TEST_CASE("global verifier returns the smallest witness") {
    Labeling t(3, 2, 2);
    // node 0: (1,1), node 1: (1,2), node 2: (2,2)
    t.at(0, 0) = 1; t.at(0, 1) = 1;
    t.at(1, 0) = 1; t.at(1, 1) = 2;
    t.at(2, 0) = 2; t.at(2, 1) = 2;
    auto w = wpp_check_global(t);
    REQUIRE(w.has_value());
    // smallest violating (i,j,l,k): t_1(0)=t_0(1)=1 but t_1(1)=2 != t_0(1)
    CHECK(w->i == 1);
    CHECK(w->j == 0);
    CHECK(w->l == 0);
    CHECK(w->k == 1);
}

TEST_CASE("global pass equals all-pairs extended pass on complete labelings") {
    // exhaustive N=4, L=2, q=2 complete labelings
    const int N = 4, L = 2, q = 2;
    int total = 1 << (N * L);
    for (int code = 0; code < total; ++code) {
        Labeling t(N, L, q);
        for (int c = 0; c < N * L; ++c) t.t[c] = 1 + ((code >> c) & 1);
        bool pairs = true;
        for (int i = 0; i < N && pairs; ++i)
            for (int j = i + 1; j < N && pairs; ++j) {
                std::vector<Label> ti = {t.at(i, 0), t.at(i, 1)}, tj = {t.at(j, 0), t.at(j, 1)};
                pairs = f_check_extended(ti, tj, q);
            }
        CHECK(!wpp_check_global(t).has_value() == pairs);
    }
}
