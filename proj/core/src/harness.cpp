#include "mpxbp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mpxbp/generate.hpp"

namespace mpx {

Scenario scenario_from_string(const std::string& s) {
    if (s == "single") return Scenario::single;
    if (s == "homogeneous2") return Scenario::homogeneous2;
    if (s == "heterogeneous2") return Scenario::heterogeneous2;
    if (s == "correlated") return Scenario::correlated;
    if (s == "qscan") return Scenario::qscan;
    if (s == "parascan") return Scenario::parascan;
    if (s == "threelayer") return Scenario::threelayer;
    throw std::invalid_argument("unknown scenario: " + s);
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::single: return "single";
        case Scenario::homogeneous2: return "homogeneous2";
        case Scenario::heterogeneous2: return "heterogeneous2";
        case Scenario::correlated: return "correlated";
        case Scenario::qscan: return "qscan";
        case Scenario::parascan: return "parascan";
        case Scenario::threelayer: return "threelayer";
    }
    return "?";
}

std::string to_string(Model m) {
    switch (m) {
        case Model::single: return "single";
        case Model::constrained: return "constrained";
        case Model::correlated: return "correlated";
    }
    return "?";
}

Model model_from_string(const std::string& s) {
    if (s == "single") return Model::single;
    if (s == "constrained") return Model::constrained;
    if (s == "correlated") return Model::correlated;
    throw std::invalid_argument("unknown model: " + s);
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    if (epsilon_grid.empty()) throw std::invalid_argument("ExperimentConfig: empty epsilon grid");
    if (N < 2) throw std::invalid_argument("ExperimentConfig: N must be >= 2");
    if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers must be >= 1");
    if (top_k < 1) throw std::invalid_argument("ExperimentConfig: top_k must be >= 1");
    bp.validate();
}

static std::vector<double> parse_grid(const std::string& value) {
    std::vector<double> grid;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    return grid;
}

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
            continue;
        }
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "scenario") cfg.scenario = scenario_from_string(value);
        else if (key == "model") cfg.model = model_from_string(value);
        else if (key == "N") cfg.N = std::stoi(value);
        else if (key == "L") cfg.L = std::stoi(value);
        else if (key == "q") cfg.q = std::stoi(value);
        else if (key == "avg_degree") cfg.avg_degree = std::stod(value);
        else if (key == "epsilon_grid") cfg.epsilon_grid = parse_grid(value);
        else if (key == "p_same_grid") cfg.p_same_grid = parse_grid(value);
        else if (key == "p_same") { cfg.p_same = std::stod(value); cfg.bp.p_same = cfg.p_same; }
        else if (key == "trials") cfg.trials = std::stoi(value);
        else if (key == "top_k") cfg.top_k = std::stoi(value);
        else if (key == "workers") cfg.workers = std::stoi(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "t_max") cfg.bp.t_max = std::stoi(value);
        else if (key == "conv_tol") cfg.bp.conv_tol = std::stod(value);
        else if (key == "n_sample") cfg.bp.n_sample = std::stod(value);
        else if (key == "w_fail") cfg.bp.w_fail = std::stod(value);
        else if (key == "w_pass") cfg.bp.w_pass = std::stod(value);
        else if (key == "damping") cfg.bp.damping = std::stod(value);
        else if (key == "init_noise") cfg.bp.init_noise = std::stod(value);
        else if (key == "schedule")
            cfg.bp.schedule = value == "sequential" ? Schedule::sequential : Schedule::random_order;
        else if (key == "alt_inner_sweeps") cfg.bp.alt_inner_sweeps = std::stoi(value);
        else if (key == "w_pass_grid") cfg.w_pass_grid = parse_grid(value);
        else if (key == "n_sample_grid") cfg.n_sample_grid = parse_grid(value);
        else if (key == "parascan_epsilon") cfg.parascan_epsilon = std::stod(value);
        else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    return parse_config(is);
}

static std::string grid_to_string(const std::vector<double>& grid) {
    std::ostringstream os;
    for (size_t i = 0; i < grid.size(); ++i) os << (i ? "," : "") << grid[i];
    return os.str();
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
    os << "scenario = " << to_string(cfg.scenario) << '\n'
       << "model = " << to_string(cfg.model) << '\n'
       << "N = " << cfg.N << '\n'
       << "L = " << cfg.L << '\n'
       << "q = " << cfg.q << '\n'
       << "avg_degree = " << cfg.avg_degree << '\n'
       << "epsilon_grid = " << grid_to_string(cfg.epsilon_grid) << '\n'
       << "p_same_grid = " << grid_to_string(cfg.p_same_grid) << '\n'
       << "p_same = " << cfg.p_same << '\n'
       << "trials = " << cfg.trials << '\n'
       << "top_k = " << cfg.top_k << '\n'
       << "workers = " << cfg.workers << '\n'
       << "seed = " << cfg.seed << '\n'
       << "t_max = " << cfg.bp.t_max << '\n'
       << "conv_tol = " << cfg.bp.conv_tol << '\n'
       << "n_sample = " << cfg.bp.n_sample << '\n'
       << "w_fail = " << cfg.bp.w_fail << '\n'
       << "w_pass = " << cfg.bp.w_pass << '\n'
       << "damping = " << cfg.bp.damping << '\n'
       << "init_noise = " << cfg.bp.init_noise << '\n'
       << "schedule = " << (cfg.bp.schedule == Schedule::sequential ? "sequential" : "random") << '\n'
       << "alt_inner_sweeps = " << cfg.bp.alt_inner_sweeps << '\n'
       << "w_pass_grid = " << grid_to_string(cfg.w_pass_grid) << '\n'
       << "n_sample_grid = " << grid_to_string(cfg.n_sample_grid) << '\n'
       << "parascan_epsilon = " << cfg.parascan_epsilon << '\n';
}

void write_trial_csv_header(std::ostream& os) {
    os << "scenario,model,epsilon,p_same,seed,q_norm,q_norm_layers,agreement,converged,sweeps_used,"
          "wpp_majority_pass,planted_match,local_pass_count,cross_layer_match,wallclock_ms\n";
}

void write_trial_csv_row(std::ostream& os, const TrialResult& r) {
    os << r.scenario << ',' << r.model << ',' << r.epsilon << ',' << r.p_same << ',' << r.seed << ','
       << r.q_norm << ',' << r.q_norm_layers << ',' << r.agreement << ',' << (r.converged ? 1 : 0)
       << ',' << r.sweeps_used << ',' << (r.wpp_majority_pass ? 1 : 0) << ','
       << (r.planted_match ? 1 : 0) << ',' << r.local_pass_count << ',' << r.cross_layer_match << ','
       << r.wallclock_ms << '\n';
}

std::vector<TrialResult> read_trial_csv(std::istream& is) {
    std::vector<TrialResult> out;
    std::string line;
    if (!std::getline(is, line)) return out; // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f;
        TrialResult r;
        auto next = [&]() {
            if (!std::getline(ss, f, ',')) throw std::runtime_error("trial csv: short row");
            return f;
        };
        r.scenario = next();
        r.model = next();
        r.epsilon = std::stod(next());
        r.p_same = std::stod(next());
        r.seed = std::stoull(next());
        r.q_norm = std::stod(next());
        r.q_norm_layers = std::stod(next());
        r.agreement = std::stod(next());
        r.converged = std::stoi(next()) != 0;
        r.sweeps_used = std::stoi(next());
        r.wpp_majority_pass = std::stoi(next()) != 0;
        r.planted_match = std::stoi(next()) != 0;
        r.local_pass_count = std::stoll(next());
        r.cross_layer_match = std::stod(next());
        r.wallclock_ms = std::stod(next());
        out.push_back(r);
    }
    return out;
}

// --- planted structures -------------------------------------------------

static std::vector<int> range_nodes(int lo, int hi) {
    std::vector<int> v(hi - lo);
    std::iota(v.begin(), v.end(), lo);
    return v;
}

CommunityStructure homogeneous2_structure(int N) {
    CommunityStructure s;
    s.N = N;
    s.L = 2;
    s.communities = {range_nodes(0, N / 2), range_nodes(N / 2, N)};
    s.presence = {{0, 1}, {0, 1}};
    s.validate();
    return s;
}

CommunityStructure heterogeneous2_structure(int N) {
    CommunityStructure s;
    s.N = N;
    s.L = 2;
    int half = N / 2, q3 = N / 2 + N / 4;
    s.communities = {range_nodes(0, half), range_nodes(half, N), range_nodes(half, q3),
                     range_nodes(q3, N)};
    s.presence = {{0, 1}, {0, 2, 3}};
    s.validate();
    return s;
}

CommunityStructure threelayer_structure(int N) {
    CommunityStructure s;
    s.N = N;
    s.L = 3;
    int half = N / 2, quarter = N / 4;
    // Five communities with pairwise distinct node sets, so with q = 5 every
    // cross-layer label reuse between different communities violates the
    // constraints and the planted pattern is the unique optimum that both
    // satisfies them and explains the edges. The tail of layer 1 stays
    // unlabeled background to keep community 2 a strict subset.
    int sub = half + (N - half) * 2 / 3;
    s.communities = {range_nodes(0, half), range_nodes(half, sub), range_nodes(half, N),
                     range_nodes(0, quarter), range_nodes(quarter, half)};
    s.presence = {{0, 1}, {0, 2}, {2, 3, 4}};
    s.validate();
    return s;
}

// Label-frequency prior over (node, layer) slots: community a's share is
// |C_a| times the number of layers it appears in. These are the size
// fractions the planted labeling realizes, and they double as the inference
// prior, breaking the exchangeability of same-sized labels.
static std::vector<double> planted_fractions(const CommunityStructure& structure, int q) {
    std::vector<double> n(q, 0.0);
    double total = 0;
    for (int l = 0; l < structure.L; ++l)
        for (int a : structure.presence[l]) {
            n[a] += structure.communities[a].size();
            total += structure.communities[a].size();
        }
    for (double& x : n) x /= total;
    return n;
}

std::vector<PlantedCluster> planted_clusters(const CommunityStructure& structure) {
    std::vector<PlantedCluster> clusters;
    for (int l = 0; l < structure.L; ++l)
        for (int a : structure.presence[l]) clusters.push_back({l, structure.communities[a]});
    return clusters;
}

// Majority label per (layer, community) slot; true iff slots share a label
// exactly when they are the same planted community ("correct convergence").
bool planted_majority_matches(const Labeling& predicted, const CommunityStructure& structure) {
    std::vector<std::pair<int, int>> slots; // (layer, community)
    std::vector<Label> slot_label;
    for (int l = 0; l < structure.L; ++l)
        for (int a : structure.presence[l]) {
            std::vector<int> votes(predicted.q + 1, 0);
            for (int i : structure.communities[a]) ++votes[predicted.at(i, l)];
            int best = 0;
            bool tie = false;
            for (int x = 1; x <= predicted.q; ++x) {
                if (votes[x] > votes[best]) {
                    best = x;
                    tie = false;
                } else if (best != 0 && votes[x] == votes[best]) {
                    tie = true;
                }
            }
            if (best == 0 || tie) return false;
            slots.emplace_back(l, a);
            slot_label.push_back(best);
        }
    for (size_t s = 0; s < slots.size(); ++s)
        for (size_t t = s + 1; t < slots.size(); ++t) {
            bool same_comm = slots[s].second == slots[t].second;
            if (same_comm != (slot_label[s] == slot_label[t])) return false;
        }
    return true;
}

// --- per-trial runners --------------------------------------------------

static Labeling slice_layer(const Labeling& labeling, int l) {
    Labeling out(labeling.N, 1, labeling.q);
    for (int i = 0; i < labeling.N; ++i) out.at(i, 0) = labeling.at(i, l);
    return out;
}

static double per_layer_q_norm(const Labeling& truth, const Labeling& predicted,
                               const std::vector<double>& n) {
    double sum = 0;
    for (int l = 0; l < truth.L; ++l)
        sum += normalized_agreement(slice_layer(truth, l), slice_layer(predicted, l), n).q_norm;
    return sum / truth.L;
}

// Pads label-space size so truth and prediction agree; extra communities get
// zero prior mass in the agreement normalization.
static void harmonize_q(Labeling& truth, Labeling& predicted, std::vector<double>& n) {
    int q = std::max(truth.q, predicted.q);
    truth.q = q;
    predicted.q = q;
    n.resize(q, 0.0);
}

static std::vector<double> truth_fractions(const Labeling& truth) {
    std::vector<double> n(truth.q, 0.0);
    long long total = 0;
    for (Label lab : truth.t) {
        if (lab == kNoLabel) continue;
        n[lab - 1] += 1;
        ++total;
    }
    for (double& x : n) x /= std::max<long long>(total, 1);
    return n;
}

namespace {
struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
};
} // namespace

static void fill_scores(TrialResult& r, Labeling truth, Labeling predicted,
                        const CommunityStructure* structure) {
    std::vector<double> n = truth_fractions(truth);
    harmonize_q(truth, predicted, n);
    if (truth.q <= 8) {
        ScoreReport report = normalized_agreement(truth, predicted, n);
        r.q_norm = report.q_norm;
        r.agreement = report.agreement;
        r.q_norm_layers = per_layer_q_norm(truth, predicted, n);
    }
    r.local_pass_count = predicted.L >= 2 ? local_constraint_score(predicted) : 0;
    if (predicted.L >= 2) r.cross_layer_match = cross_layer_match_fraction(predicted, 0, 1);
    if (structure) {
        r.wpp_majority_pass = wpp_majority_trial_check(predicted, planted_clusters(*structure));
        r.planted_match = planted_majority_matches(predicted, *structure);
    }
}

TrialResult run_single_layer_trial(int N, double epsilon, double avg_degree, const BpConfig& bp,
                                   std::uint64_t seed) {
    Timer timer;
    auto aff = BenchmarkAffinity::from_epsilon_degree(epsilon, avg_degree, 2);
    SbmParams params = aff.expand(2, N);
    BpConfig cfg = bp;
    cfg.rng_seed = trial_seed(seed, 1);
    GeneratedLayer layer = generate_single_layer(params, trial_seed(seed, 0));
    MultiplexNetwork net;
    net.N = N;
    net.L = 1;
    net.layers = {layer.edges};
    Labeling truth(N, 1, 2);
    for (int i = 0; i < N; ++i) truth.at(i, 0) = layer.labels[i];

    BpEngine engine(net, params, cfg, Model::single);
    DetectionResult det = engine.run();

    TrialResult r;
    r.scenario = "single";
    r.model = "single";
    r.epsilon = epsilon;
    r.seed = seed;
    r.converged = det.converged;
    r.sweeps_used = det.sweeps_used;
    fill_scores(r, truth, det.labels, nullptr);
    r.wallclock_ms = timer.ms();
    return r;
}

TrialResult run_homogeneous_trial(int N, double epsilon, double avg_degree, Model model, int q_inf,
                                  const BpConfig& bp, std::uint64_t seed) {
    Timer timer;
    CommunityStructure structure = homogeneous2_structure(N);
    auto aff = BenchmarkAffinity::from_epsilon_degree(epsilon, avg_degree, 2);
    auto [net, truth] = generate_multiplex_wpp(structure, aff, trial_seed(seed, 0));
    SbmParams params = aff.expand(q_inf, N);
    BpConfig cfg = bp;
    cfg.rng_seed = trial_seed(seed, 1);

    BpEngine engine(net, params, cfg, model);
    DetectionResult det = engine.run();

    TrialResult r;
    r.scenario = "homogeneous2";
    r.model = to_string(model);
    r.epsilon = epsilon;
    r.p_same = model == Model::correlated ? cfg.p_same : 0;
    r.seed = seed;
    r.converged = det.converged;
    r.sweeps_used = det.sweeps_used;
    fill_scores(r, truth, det.labels, &structure);
    r.wallclock_ms = timer.ms();
    return r;
}

TrialResult run_heterogeneous_trial(int N, double epsilon, double avg_degree, Model model,
                                    const BpConfig& bp, std::uint64_t seed) {
    Timer timer;
    CommunityStructure structure = heterogeneous2_structure(N);
    auto aff = BenchmarkAffinity::from_epsilon_degree(epsilon, avg_degree, 2);
    auto [net, truth] = generate_multiplex_wpp(structure, aff, trial_seed(seed, 0));
    SbmParams params = aff.expand(4, N);
    params.n = planted_fractions(structure, 4);
    BpConfig cfg = bp;
    cfg.rng_seed = trial_seed(seed, 1);

    BpEngine engine(net, params, cfg, model);
    DetectionResult det = engine.run();

    TrialResult r;
    r.scenario = "heterogeneous2";
    r.model = to_string(model);
    r.epsilon = epsilon;
    r.p_same = model == Model::correlated ? cfg.p_same : 0;
    r.seed = seed;
    r.converged = det.converged;
    r.sweeps_used = det.sweeps_used;
    fill_scores(r, truth, det.labels, &structure);
    r.wallclock_ms = timer.ms();
    return r;
}

TrialResult run_correlated_trial(int N, double epsilon, double avg_degree, double p_same, int q,
                                 const BpConfig& bp, std::uint64_t seed) {
    Timer timer;
    auto aff = BenchmarkAffinity::from_epsilon_degree(epsilon, avg_degree, q);
    SbmParams params = aff.expand(q, N);
    auto [net, truth] = generate_correlated(params, p_same, 2, trial_seed(seed, 0));
    BpConfig cfg = bp;
    cfg.p_same = p_same;
    cfg.rng_seed = trial_seed(seed, 1);

    BpEngine engine(net, params, cfg, Model::correlated);
    DetectionResult det = engine.run();

    TrialResult r;
    r.scenario = "correlated";
    r.model = "correlated";
    r.epsilon = epsilon;
    r.p_same = p_same;
    r.seed = seed;
    r.converged = det.converged;
    r.sweeps_used = det.sweeps_used;
    fill_scores(r, truth, det.labels, nullptr);
    r.wallclock_ms = timer.ms();
    return r;
}

TrialResult run_threelayer_trial(int N, double epsilon, double avg_degree, const BpConfig& bp,
                                 std::uint64_t seed, bool alternating) {
    Timer timer;
    CommunityStructure structure = threelayer_structure(N);
    auto aff = BenchmarkAffinity::from_epsilon_degree(epsilon, avg_degree, 2);
    auto [net, truth] = generate_multiplex_wpp(structure, aff, trial_seed(seed, 0));
    SbmParams params = aff.expand(5, N);
    params.n = planted_fractions(structure, 5);
    BpConfig cfg = bp;
    cfg.rng_seed = trial_seed(seed, 1);

    BpEngine engine(net, params, cfg, Model::constrained);
    DetectionResult det = alternating ? engine.run_alternating() : engine.run();

    TrialResult r;
    r.scenario = "threelayer";
    r.model = alternating ? "constrained-alt" : "constrained";
    r.epsilon = epsilon;
    r.seed = seed;
    r.converged = det.converged;
    r.sweeps_used = det.sweeps_used;
    fill_scores(r, truth, det.labels, &structure);
    r.wallclock_ms = timer.ms();
    return r;
}

double simulate_random_cluster_wpp_rate(const CommunityStructure& structure, int q, int trials,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> labels(q);
    int pass = 0;
    for (int t = 0; t < trials; ++t) {
        Labeling labeling(structure.N, structure.L, q);
        bool feasible = true;
        for (int l = 0; l < structure.L && feasible; ++l) {
            int k = static_cast<int>(structure.presence[l].size());
            if (k > q) {
                feasible = false;
                break;
            }
            std::iota(labels.begin(), labels.end(), 1);
            // uniform ordered k-sample of distinct labels
            for (int s = 0; s < k; ++s) {
                int r = s + static_cast<int>(std::uniform_int_distribution<int>(0, q - 1 - s)(rng));
                std::swap(labels[s], labels[r]);
            }
            int s = 0;
            for (int a : structure.presence[l]) {
                for (int i : structure.communities[a]) labeling.at(i, l) = labels[s];
                ++s;
            }
        }
        if (feasible && !wpp_check_global(labeling)) ++pass;
    }
    return static_cast<double>(pass) / trials;
}

// --- orchestration ------------------------------------------------------

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<TrialResult> run_trials(int count, int workers,
                                    const std::function<TrialResult(int)>& fn) {
    std::vector<TrialResult> results(count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    int nthreads = std::min(workers, count);
    threads.reserve(nthreads);
    for (int w = 0; w < nthreads; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

static std::pair<double, double> mean_se(const std::vector<double>& xs) {
    if (xs.empty()) return {0, 0};
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    if (xs.size() < 2) return {mean, 0};
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (xs.size() - 1);
    return {mean, std::sqrt(var / xs.size())};
}

CurvePoint aggregate(const std::vector<TrialResult>& results, int top_k) {
    CurvePoint p;
    if (results.empty()) return p;
    p.model = results.front().model;
    p.p_same = results.front().p_same;
    p.epsilon = results.front().epsilon;
    p.trials = static_cast<int>(results.size());
    std::vector<double> q, ql, agr;
    int wpp = 0, planted = 0;
    for (const auto& r : results) {
        q.push_back(r.q_norm);
        ql.push_back(r.q_norm_layers);
        agr.push_back(r.agreement);
        wpp += r.wpp_majority_pass ? 1 : 0;
        planted += r.planted_match ? 1 : 0;
    }
    p.planted_match_fraction = static_cast<double>(planted) / results.size();
    std::tie(p.mean_q, p.se_q) = mean_se(q);
    std::tie(p.mean_q_layers, p.se_q_layers) = mean_se(ql);
    std::tie(p.mean_agreement, p.se_agreement) = mean_se(agr);
    p.wpp_pass_fraction = static_cast<double>(wpp) / results.size();

    std::vector<TrialResult> sorted = results;
    std::sort(sorted.begin(), sorted.end(), [](const TrialResult& a, const TrialResult& b) {
        return a.local_pass_count > b.local_pass_count;
    });
    int k = std::min<int>(top_k, static_cast<int>(sorted.size()));
    double sum = 0;
    for (int i = 0; i < k; ++i) sum += sorted[i].agreement;
    p.top_k_agreement = k ? sum / k : 0;
    return p;
}

void write_curve_csv_header(std::ostream& os) {
    os << "model,p_same,epsilon,trials,mean_q,se_q,mean_q_layers,se_q_layers,mean_agreement,"
          "se_agreement,wpp_pass_fraction,planted_match_fraction,top_k_agreement\n";
}

void write_curve_csv_row(std::ostream& os, const CurvePoint& p) {
    os << p.model << ',' << p.p_same << ',' << p.epsilon << ',' << p.trials << ',' << p.mean_q << ','
       << p.se_q << ',' << p.mean_q_layers << ',' << p.se_q_layers << ',' << p.mean_agreement << ','
       << p.se_agreement << ',' << p.wpp_pass_fraction << ',' << p.planted_match_fraction << ','
       << p.top_k_agreement << '\n';
}

void emit_plot_script(const std::string& path, const std::string& csv_name, bool heatmap) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "#!/usr/bin/env python3\n"
          "import csv, sys\n"
          "import matplotlib\n"
          "matplotlib.use('Agg')\n"
          "import matplotlib.pyplot as plt\n"
          "\n"
          "csv_path = sys.argv[1] if len(sys.argv) > 1 else '" << csv_name << "'\n"
          "rows = list(csv.DictReader(open(csv_path)))\n";
    if (heatmap) {
        os << "xs = sorted({float(r['n_sample']) for r in rows})\n"
              "ys = sorted({float(r['w_pass']) for r in rows})\n"
              "grid = [[0.0]*len(xs) for _ in ys]\n"
              "for r in rows:\n"
              "    grid[ys.index(float(r['w_pass']))][xs.index(float(r['n_sample']))] = float(r['wpp_pass_fraction'])\n"
              "fig, ax = plt.subplots()\n"
              "im = ax.imshow(grid, origin='lower', aspect='auto', vmin=0, vmax=1,\n"
              "               extent=[min(xs), max(xs), min(ys), max(ys)])\n"
              "fig.colorbar(im, label='WPP-satisfying fraction')\n"
              "ax.set_xlabel('n_sample')\n"
              "ax.set_ylabel('w_pass')\n"
              "fig.savefig(csv_path.rsplit('.', 1)[0] + '.png', dpi=150)\n";
    } else {
        os << "series = {}\n"
              "for r in rows:\n"
              "    key = (r['model'], r['p_same'])\n"
              "    series.setdefault(key, []).append(r)\n"
              "fig, ax = plt.subplots()\n"
              "for (model, p_same), pts in sorted(series.items()):\n"
              "    pts.sort(key=lambda r: float(r['epsilon']))\n"
              "    xs = [float(r['epsilon']) for r in pts]\n"
              "    ys = [float(r['mean_q']) for r in pts]\n"
              "    es = [float(r['se_q']) for r in pts]\n"
              "    label = model if float(p_same) == 0 else f'{model} p_same={p_same}'\n"
              "    ax.errorbar(xs, ys, yerr=es, marker='o', capsize=2, label=label)\n"
              "ax.set_xlabel('epsilon = p_out / p_in')\n"
              "ax.set_ylabel('normalized agreement Q')\n"
              "ax.set_ylim(-0.05, 1.05)\n"
              "ax.legend()\n"
              "fig.savefig(csv_path.rsplit('.', 1)[0] + '.png', dpi=150)\n";
    }
}

} // namespace mpx
