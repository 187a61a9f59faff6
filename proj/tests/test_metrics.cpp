#include <doctest.h>

#include <vector>

#include "mpxbp/harness.hpp"
#include "mpxbp/metrics.hpp"

using namespace mpx;

TEST_CASE("agreement is permutation invariant and normalized") {
    Labeling truth(6, 1, 2);
    Labeling pred(6, 1, 2);
    for (int i = 0; i < 6; ++i) {
        truth.at(i, 0) = i < 3 ? 1 : 2;
        pred.at(i, 0) = i < 3 ? 2 : 1; // swapped labels
    }
    std::vector<double> n = {0.5, 0.5};
    auto r = normalized_agreement(truth, pred, n);
    CHECK(r.agreement == doctest::Approx(1.0));
    CHECK(r.q_norm == doctest::Approx(1.0));
    CHECK(r.best_permutation == std::vector<int>{2, 1});
}

TEST_CASE("constant prediction scores zero") {
    Labeling truth(10, 1, 2);
    Labeling pred(10, 1, 2);
    for (int i = 0; i < 10; ++i) {
        truth.at(i, 0) = i < 5 ? 1 : 2;
        pred.at(i, 0) = 1;
    }
    std::vector<double> n = {0.5, 0.5};
    auto r = normalized_agreement(truth, pred, n);
    CHECK(r.agreement == doctest::Approx(0.5));
    CHECK(r.q_norm == doctest::Approx(0.0));
}

TEST_CASE("agreement hand example with empty truth labels") {
    // truth: nodes 0..3 labeled, 4..5 unlabeled in layer 1 of 2
    Labeling truth(3, 2, 2);
    Labeling pred(3, 2, 2);
    truth.at(0, 0) = 1; truth.at(1, 0) = 1; truth.at(2, 0) = 2;
    truth.at(0, 1) = 1; truth.at(1, 1) = kNoLabel; truth.at(2, 1) = 2;
    // prediction correct on 4 of the 5 labeled copies
    pred.at(0, 0) = 1; pred.at(1, 0) = 2; pred.at(2, 0) = 2;
    pred.at(0, 1) = 1; pred.at(1, 1) = 1; pred.at(2, 1) = 2;
    std::vector<double> n = {0.6, 0.4};
    auto r = normalized_agreement(truth, pred, n);
    CHECK(r.agreement == doctest::Approx(4.0 / 5.0));
    CHECK(r.q_norm == doctest::Approx((0.8 - 0.6) / (1.0 - 0.6)));
}

TEST_CASE("agreement rejects large q and shape mismatch") {
    Labeling a(2, 1, 9), b(2, 1, 9);
    a.at(0, 0) = a.at(1, 0) = 1;
    b.at(0, 0) = b.at(1, 0) = 1;
    std::vector<double> n(9, 1.0 / 9);
    CHECK_THROWS(normalized_agreement(a, b, n));
    Labeling c(3, 1, 2);
    Labeling d(2, 1, 2);
    std::vector<double> n2 = {0.5, 0.5};
    CHECK_THROWS(normalized_agreement(c, d, n2));
}

TEST_CASE("majority cluster labels against the partition property") {
    CommunityStructure s = heterogeneous2_structure(8); // halves 4, quarters 2
    auto clusters = planted_clusters(s);
    REQUIRE(clusters.size() == 5);

    Labeling good(8, 2, 4);
    for (int i = 0; i < 8; ++i) good.at(i, 0) = i < 4 ? 1 : 2;
    for (int i = 0; i < 8; ++i) good.at(i, 1) = i < 4 ? 1 : (i < 6 ? 3 : 4);
    CHECK(wpp_majority_trial_check(good, clusters));
    CHECK(planted_majority_matches(good, s));

    // reuse of label 2 for a different node set across layers breaks WPP
    Labeling bad = good;
    for (int i = 4; i < 6; ++i) bad.at(i, 1) = 2;
    CHECK(!wpp_majority_trial_check(bad, clusters));
    CHECK(!planted_majority_matches(bad, s));

    // merging the two quarters is WPP-consistent but not the planted pattern
    Labeling coarse = good;
    for (int i = 6; i < 8; ++i) coarse.at(i, 1) = 3;
    CHECK(wpp_majority_trial_check(coarse, clusters));
    CHECK(!planted_majority_matches(coarse, s));

    // splitting the first-half community across layers: consistent, wrong
    Labeling split = good;
    for (int i = 0; i < 4; ++i) split.at(i, 1) = 2; // needs label 2 free there
    CHECK(!planted_majority_matches(split, s));
}

TEST_CASE("majority is robust to a minority of dissenters") {
    CommunityStructure s = homogeneous2_structure(10);
    auto clusters = planted_clusters(s);
    Labeling pred(10, 2, 2);
    for (int i = 0; i < 10; ++i)
        for (int l = 0; l < 2; ++l) pred.at(i, l) = i < 5 ? 1 : 2;
    pred.at(0, 0) = 2; // one dissenter
    CHECK(wpp_majority_trial_check(pred, clusters));
    CHECK(planted_majority_matches(pred, s));
}

TEST_CASE("local constraint score counts passing tuples") {
    // identical labels across layers: every (pair, layer pair) passes
    Labeling t(5, 2, 2);
    for (int i = 0; i < 5; ++i)
        for (int l = 0; l < 2; ++l) t.at(i, l) = i < 2 ? 1 : 2;
    CHECK(local_constraint_score(t) == 10); // C(5,2) pairs, one layer pair

    // flip one node in one layer; pairs with an inconsistent tuple drop out
    t.at(0, 1) = 2;
    long long expect = 0;
    CheckTable table = build_check_table(2);
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            expect += table.pass(t.at(i, 0), t.at(j, 0), t.at(i, 1), t.at(j, 1));
    CHECK(local_constraint_score(t) == expect);
    CHECK(expect < 10);
}

TEST_CASE("cross layer match fraction") {
    Labeling t(4, 2, 2);
    for (int i = 0; i < 4; ++i) {
        t.at(i, 0) = 1;
        t.at(i, 1) = i < 3 ? 1 : 2;
    }
    CHECK(cross_layer_match_fraction(t, 0, 1) == doctest::Approx(0.75));
}
