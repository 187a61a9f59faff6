#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpxbp/types.hpp"

namespace mpx {

// Edge-list text format: header "N L q", then one line "l i j" per edge
// (1-based layer, 0-based nodes). The q in the header is the label-space
// size carried alongside the network.
void write_network(std::ostream& os, const MultiplexNetwork& net, int q);
void write_network_file(const std::string& path, const MultiplexNetwork& net, int q);
std::pair<MultiplexNetwork, int> read_network(std::istream& is);
std::pair<MultiplexNetwork, int> read_network_file(const std::string& path);

// Ground-truth label format: one line "l i t" per node copy, t = 0 meaning
// no label.
void write_labels(std::ostream& os, const Labeling& labeling);
void write_labels_file(const std::string& path, const Labeling& labeling);
Labeling read_labels(std::istream& is, int q);
Labeling read_labels_file(const std::string& path, int q);

// CSV dumps: beliefs as layer,node,b1..bq; labels as layer,node,label.
void write_belief_csv(std::ostream& os, const std::vector<double>& beliefs, int N, int L, int q);
void write_label_csv(std::ostream& os, const Labeling& labeling);

} // namespace mpx
