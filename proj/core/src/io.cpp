#include "mpxbp/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpx {

static std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

static std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return is;
}

void write_network(std::ostream& os, const MultiplexNetwork& net, int q) {
    os << net.N << ' ' << net.L << ' ' << q << '\n';
    for (int l = 0; l < net.L; ++l)
        for (auto [i, j] : net.layers[l]) os << l + 1 << ' ' << i << ' ' << j << '\n';
}

void write_network_file(const std::string& path, const MultiplexNetwork& net, int q) {
    auto os = open_out(path);
    write_network(os, net, q);
}

std::pair<MultiplexNetwork, int> read_network(std::istream& is) {
    MultiplexNetwork net;
    int q = 0;
    if (!(is >> net.N >> net.L >> q)) throw std::runtime_error("network parse error: bad header");
    if (net.N < 1 || net.L < 1 || q < 1) throw std::runtime_error("network parse error: bad header values");
    net.layers.resize(net.L);
    int l, i, j;
    while (is >> l >> i >> j) {
        if (l < 1 || l > net.L) throw std::runtime_error("network parse error: layer out of range");
        if (i > j) std::swap(i, j);
        net.layers[l - 1].emplace_back(i, j);
    }
    for (auto& edges : net.layers) std::sort(edges.begin(), edges.end());
    net.validate();
    return {net, q};
}

std::pair<MultiplexNetwork, int> read_network_file(const std::string& path) {
    auto is = open_in(path);
    return read_network(is);
}

void write_labels(std::ostream& os, const Labeling& labeling) {
    for (int l = 0; l < labeling.L; ++l)
        for (int i = 0; i < labeling.N; ++i)
            os << l + 1 << ' ' << i << ' ' << labeling.at(i, l) << '\n';
}

void write_labels_file(const std::string& path, const Labeling& labeling) {
    auto os = open_out(path);
    write_labels(os, labeling);
}

Labeling read_labels(std::istream& is, int q) {
    struct Row {
        int l, i, t;
    };
    std::vector<Row> rows;
    int maxN = 0, maxL = 0;
    int l, i, t;
    while (is >> l >> i >> t) {
        if (l < 1 || i < 0) throw std::runtime_error("label parse error");
        rows.push_back({l, i, t});
        maxN = std::max(maxN, i + 1);
        maxL = std::max(maxL, l);
    }
    if (rows.empty()) throw std::runtime_error("label parse error: empty file");
    Labeling labeling(maxN, maxL, q);
    for (const auto& r : rows) labeling.at(r.i, r.l - 1) = r.t;
    labeling.validate();
    return labeling;
}

Labeling read_labels_file(const std::string& path, int q) {
    auto is = open_in(path);
    return read_labels(is, q);
}

void write_belief_csv(std::ostream& os, const std::vector<double>& beliefs, int N, int L, int q) {
    os << "layer,node";
    for (int a = 1; a <= q; ++a) os << ",b" << a;
    os << '\n';
    for (int l = 0; l < L; ++l)
        for (int i = 0; i < N; ++i) {
            os << l + 1 << ',' << i;
            for (int a = 0; a < q; ++a)
                os << ',' << beliefs[(static_cast<size_t>(i) * L + l) * q + a];
            os << '\n';
        }
}

void write_label_csv(std::ostream& os, const Labeling& labeling) {
    os << "layer,node,label\n";
    for (int l = 0; l < labeling.L; ++l)
        for (int i = 0; i < labeling.N; ++i)
            os << l + 1 << ',' << i << ',' << labeling.at(i, l) << '\n';
}

} // namespace mpx
