#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppimine/corpus.hpp"
#include "ppimine/features.hpp"

namespace ppimine::proxnet {

/// Binary paragraph x node relation of one document. Nodes are the stems
/// occurring in at least one paragraph; when a recognizer is supplied, the
/// case-folded mention strings found per paragraph join as auxiliary nodes
/// (they survive stemming damage to protein names).
struct IncidenceMatrix {
  std::vector<std::string> nodes;  // sorted, unique
  std::size_t n_paragraphs = 0;
  std::vector<std::vector<std::uint64_t>> bits;  // per node, bitset over paragraphs

  std::ptrdiff_t node_index(const std::string& name) const;  // -1 when absent
};

IncidenceMatrix build_incidence(const PreparedDoc& doc,
                                const MentionRecognizer* recognizer = nullptr);

/// Jaccard similarity of the two nodes' paragraph incidence sets.
double wpp(const IncidenceMatrix& m, std::size_t i, std::size_t j);
double wpp(const IncidenceMatrix& m, const std::string& a, const std::string& b);

struct Edge {
  std::string a, b;  // a < b
  double w = 0.0;
};

/// The word proximity network of one document: all node pairs with nonzero
/// weight, sorted lexicographically. Self-loops are implicit (weight 1).
struct ProximityNetwork {
  IncidenceMatrix incidence;
  std::vector<Edge> edges;
};

ProximityNetwork build_network(const PreparedDoc& doc,
                               const MentionRecognizer* recognizer = nullptr);
std::vector<Edge> build_edges(const IncidenceMatrix& m);
std::vector<Edge> build_edges_serial(const IncidenceMatrix& m);

struct Expansion {
  std::vector<std::string> seeds_found;
  std::vector<std::string> seeds_missing;  // skipped with a warning
  std::vector<std::pair<std::string, double>> neighbors;  // by max seed weight, truncated

  std::vector<std::string> expanded_set() const;  // seeds plus neighbors
};

/// Nodes connected to any seed with weight >= threshold, ranked by their
/// best edge weight to a seed (ties lexicographic) and truncated to `limit`.
Expansion expand_features(const IncidenceMatrix& m, const std::vector<std::string>& seeds,
                          double threshold = 0.25, std::size_t limit = 50);

/// TSV edge list (node_a, node_b, wpp).
void save_edges_tsv(const std::vector<Edge>& edges, const std::string& path);

}  // namespace ppimine::proxnet
