#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "mpxbp/harness.hpp"

using namespace mpx;

TEST_CASE("config parsing, defaults and round trip") {
    std::stringstream in(
        "# comment line\n"
        "scenario = heterogeneous2\n"
        "model = correlated\n"
        "N = 120\n"
        "epsilon_grid = 0.1,0.2,0.3  # inline comment\n"
        "p_same = 0.7\n"
        "trials = 5\n"
        "n_sample = 0.1\n"
        "w_pass = 0.9\n"
        "w_fail = 0.1\n"
        "schedule = sequential\n"
        "seed = 99\n");
    ExperimentConfig cfg = parse_config(in);
    CHECK(cfg.scenario == Scenario::heterogeneous2);
    CHECK(cfg.model == Model::correlated);
    CHECK(cfg.N == 120);
    CHECK(cfg.epsilon_grid == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(cfg.p_same == 0.7);
    CHECK(cfg.bp.p_same == 0.7);
    CHECK(cfg.trials == 5);
    CHECK(cfg.bp.n_sample == 0.1);
    CHECK(cfg.bp.w_pass == 0.9);
    CHECK(cfg.bp.schedule == Schedule::sequential);
    CHECK(cfg.seed == 99);
    // untouched defaults
    CHECK(cfg.bp.t_max == 100);
    CHECK(cfg.bp.conv_tol == 1e-6);
    CHECK(cfg.top_k == 20);

    std::stringstream out;
    write_config(out, cfg);
    ExperimentConfig cfg2 = parse_config(out);
    CHECK(cfg2.scenario == cfg.scenario);
    CHECK(cfg2.N == cfg.N);
    CHECK(cfg2.epsilon_grid == cfg.epsilon_grid);
    CHECK(cfg2.bp.n_sample == cfg.bp.n_sample);
    CHECK(cfg2.bp.schedule == cfg.bp.schedule);
}

TEST_CASE("config parser rejects junk") {
    std::stringstream unknown("frobnicate = 3\n");
    CHECK_THROWS(parse_config(unknown));
    std::stringstream noeq("scenario single\n");
    CHECK_THROWS(parse_config(noeq));
    std::stringstream invalid("trials = 0\n");
    CHECK_THROWS(parse_config(invalid));
}

TEST_CASE("trial rows round trip through csv") {
    TrialResult r;
    r.scenario = "homogeneous2";
    r.model = "constrained";
    r.epsilon = 0.25;
    r.p_same = 0.9;
    r.seed = 12345;
    r.q_norm = 0.625;
    r.q_norm_layers = 0.5;
    r.agreement = 0.8125;
    r.converged = true;
    r.sweeps_used = 42;
    r.wpp_majority_pass = true;
    r.planted_match = false;
    r.local_pass_count = 190;
    r.cross_layer_match = 0.75;
    r.wallclock_ms = 12.5;
    std::stringstream ss;
    write_trial_csv_header(ss);
    write_trial_csv_row(ss, r);
    auto rows = read_trial_csv(ss);
    REQUIRE(rows.size() == 1);
    const TrialResult& b = rows[0];
    CHECK(b.scenario == r.scenario);
    CHECK(b.model == r.model);
    CHECK(b.epsilon == r.epsilon);
    CHECK(b.p_same == r.p_same);
    CHECK(b.seed == r.seed);
    CHECK(b.q_norm == r.q_norm);
    CHECK(b.agreement == r.agreement);
    CHECK(b.converged == r.converged);
    CHECK(b.sweeps_used == r.sweeps_used);
    CHECK(b.wpp_majority_pass == r.wpp_majority_pass);
    CHECK(b.planted_match == r.planted_match);
    CHECK(b.local_pass_count == r.local_pass_count);
    CHECK(b.cross_layer_match == r.cross_layer_match);
    CHECK(b.wallclock_ms == r.wallclock_ms);
}

TEST_CASE("planted structures have the documented shapes") {
    CommunityStructure hom = homogeneous2_structure(200);
    CHECK(hom.communities.size() == 2);
    CHECK(hom.communities[0].size() == 100);
    CHECK(hom.presence == std::vector<std::vector<int>>{{0, 1}, {0, 1}});
    CHECK(hom.observable());

    CommunityStructure het = heterogeneous2_structure(200);
    CHECK(het.communities.size() == 4);
    CHECK(het.communities[0].size() == 100);
    CHECK(het.communities[1].size() == 100);
    CHECK(het.communities[2].size() == 50);
    CHECK(het.communities[3].size() == 50);
    CHECK(het.presence == std::vector<std::vector<int>>{{0, 1}, {0, 2, 3}});
    CHECK(het.observable());

    CommunityStructure three = threelayer_structure(90);
    CHECK(three.communities.size() == 5);
    CHECK(three.L == 3);
    CHECK(three.communities[0].size() == 45);
    CHECK(three.communities[1].size() == 30); // strict subset of community 2's nodes
    CHECK(three.communities[2].size() == 45);
    CHECK(three.presence == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {2, 3, 4}});
    CHECK(three.observable());
    CHECK_NOTHROW(three.validate());
    // all five node sets pairwise distinct, so every slot identification is forced
    for (size_t a = 0; a < three.communities.size(); ++a)
        for (size_t b = a + 1; b < three.communities.size(); ++b)
            CHECK(three.communities[a] != three.communities[b]);
}

TEST_CASE("trial seeds do not collide in practice") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t base : {1ULL, 2ULL, 999ULL})
        for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(trial_seed(base, i));
    CHECK(seen.size() == 3000);
}

TEST_CASE("parallel trial batches match serial ones") {
    auto fn = [](int i) {
        BpConfig bp;
        bp.t_max = 5;
        return run_single_layer_trial(60, 0.1, 4.0, bp, trial_seed(7, i));
    };
    auto serial = run_trials(6, 1, fn);
    auto parallel = run_trials(6, 3, fn);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].seed == parallel[i].seed);
        CHECK(serial[i].q_norm == parallel[i].q_norm);
        CHECK(serial[i].agreement == parallel[i].agreement);
    }
}

TEST_CASE("trial runners are deterministic per seed") {
    BpConfig bp;
    bp.t_max = 10;
    auto a = run_homogeneous_trial(40, 0.15, 4.0, Model::constrained, 2, bp, 5);
    auto b = run_homogeneous_trial(40, 0.15, 4.0, Model::constrained, 2, bp, 5);
    CHECK(a.q_norm == b.q_norm);
    CHECK(a.agreement == b.agreement);
    CHECK(a.local_pass_count == b.local_pass_count);
    CHECK(a.sweeps_used == b.sweeps_used);
}

TEST_CASE("single layer trial at zero noise recovers the partition") {
    BpConfig bp;
    auto r = run_single_layer_trial(100, 0.0, 8.0, bp, 11);
    CHECK(r.q_norm >= 0.9);
    CHECK(r.converged);
}

TEST_CASE("aggregation statistics") {
    std::vector<TrialResult> rows(4);
    double qs[4] = {0.2, 0.4, 0.6, 0.8};
    for (int i = 0; i < 4; ++i) {
        rows[i].model = "constrained";
        rows[i].epsilon = 0.1;
        rows[i].q_norm = qs[i];
        rows[i].agreement = 0.5 + 0.1 * i;
        rows[i].local_pass_count = i; // top-2 by score: i = 3, 2
        rows[i].wpp_majority_pass = i % 2 == 0;
    }
    CurvePoint p = aggregate(rows, 2);
    CHECK(p.trials == 4);
    CHECK(p.mean_q == doctest::Approx(0.5));
    // sample sd = sqrt(var of {0.2..0.8}) / sqrt(4)
    double sd = std::sqrt(((0.09 + 0.01) * 2) / 3.0);
    CHECK(p.se_q == doctest::Approx(sd / 2.0));
    CHECK(p.wpp_pass_fraction == doctest::Approx(0.5));
    CHECK(p.top_k_agreement == doctest::Approx((0.8 + 0.7) / 2));
}

TEST_CASE("random distinct cluster labels satisfy the partition at chance rate") {
    CommunityStructure het = heterogeneous2_structure(40);
    double rate = simulate_random_cluster_wpp_rate(het, 4, 20000, 3);
    // exact chance level: layer 1 fixes the shared community's label; of the
    // 288 joint assignments, 24 are consistent -> 1/12
    double expect = 1.0 / 12.0;
    double sigma = std::sqrt(expect * (1 - expect) / 20000);
    CHECK(std::abs(rate - expect) <= 4 * sigma);
}

TEST_CASE("scenario and model names round trip") {
    for (auto s : {Scenario::single, Scenario::homogeneous2, Scenario::heterogeneous2,
                   Scenario::correlated, Scenario::qscan, Scenario::parascan, Scenario::threelayer})
        CHECK(scenario_from_string(to_string(s)) == s);
    for (auto m : {Model::single, Model::constrained, Model::correlated})
        CHECK(model_from_string(to_string(m)) == m);
    CHECK_THROWS(scenario_from_string("bogus"));
    CHECK_THROWS(model_from_string("bogus"));
}
