#include "ppimine/proxnet.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "ppimine/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppimine::proxnet {

std::ptrdiff_t IncidenceMatrix::node_index(const std::string& name) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), name);
  if (it == nodes.end() || *it != name) return -1;
  return it - nodes.begin();
}

IncidenceMatrix build_incidence(const PreparedDoc& doc, const MentionRecognizer* recognizer) {
  std::size_t m = doc.para_stems.size();
  if (m == 0) throw std::invalid_argument("build_incidence: document has no paragraphs");

  std::map<std::string, std::set<std::size_t>> where;
  for (std::size_t k = 0; k < m; ++k)
    for (const auto& s : doc.para_stems[k]) where[s].insert(k);
  if (recognizer) {
    for (std::size_t k = 0; k < m; ++k) {
      for (const auto& mention :
           features::distinct_mentions(*doc.doc, doc.doc->paragraphs[k], *recognizer))
        where[mention].insert(k);
    }
  }

  IncidenceMatrix out;
  out.n_paragraphs = m;
  std::size_t blocks = (m + 63) / 64;
  for (auto& [node, paras] : where) {
    out.nodes.push_back(node);
    std::vector<std::uint64_t> bits(blocks, 0);
    for (std::size_t k : paras) bits[k / 64] |= (1ULL << (k % 64));
    out.bits.push_back(std::move(bits));
  }
  return out;
}

double wpp(const IncidenceMatrix& m, std::size_t i, std::size_t j) {
  const auto& a = m.bits[i];
  const auto& b = m.bits[j];
  std::uint64_t both = 0, either = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    both += static_cast<std::uint64_t>(std::popcount(a[k] & b[k]));
    either += static_cast<std::uint64_t>(std::popcount(a[k] | b[k]));
  }
  return static_cast<double>(both) / static_cast<double>(either);
}

double wpp(const IncidenceMatrix& m, const std::string& a, const std::string& b) {
  std::ptrdiff_t i = m.node_index(a);
  std::ptrdiff_t j = m.node_index(b);
  if (i < 0 || j < 0) throw std::invalid_argument("wpp: node not in network");
  return wpp(m, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
}

std::vector<Edge> build_edges_serial(const IncidenceMatrix& m) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < m.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < m.nodes.size(); ++j) {
      double w = wpp(m, i, j);
      if (w > 0.0) edges.push_back({m.nodes[i], m.nodes[j], w});
    }
  return edges;
}

std::vector<Edge> build_edges(const IncidenceMatrix& m) {
  std::size_t n = m.nodes.size();
  std::vector<std::vector<Edge>> per_row(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (long li = 0; li < static_cast<long>(n); ++li) {
    auto i = static_cast<std::size_t>(li);
    for (std::size_t j = i + 1; j < n; ++j) {
      double w = wpp(m, i, j);
      if (w > 0.0) per_row[i].push_back({m.nodes[i], m.nodes[j], w});
    }
  }
  std::vector<Edge> edges;
  for (auto& row : per_row)
    edges.insert(edges.end(), row.begin(), row.end());
  return edges;
}

ProximityNetwork build_network(const PreparedDoc& doc, const MentionRecognizer* recognizer) {
  ProximityNetwork net;
  net.incidence = build_incidence(doc, recognizer);
  net.edges = build_edges(net.incidence);
  return net;
}

Expansion expand_features(const IncidenceMatrix& m, const std::vector<std::string>& seeds,
                          double threshold, std::size_t limit) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw std::invalid_argument("expand_features: threshold must lie in (0,1]");

  Expansion out;
  std::set<std::size_t> seed_idx;
  std::set<std::string> seed_names;
  for (const auto& s : seeds) {
    std::ptrdiff_t i = m.node_index(s);
    if (i < 0) {
      out.seeds_missing.push_back(s);
      continue;
    }
    if (seed_names.insert(s).second) {
      out.seeds_found.push_back(s);
      seed_idx.insert(static_cast<std::size_t>(i));
    }
  }

  std::map<std::string, double> best_weight;
  for (std::size_t j = 0; j < m.nodes.size(); ++j) {
    if (seed_idx.count(j)) continue;
    double best = 0.0;
    for (std::size_t i : seed_idx) best = std::max(best, wpp(m, i, j));
    if (best >= threshold) best_weight[m.nodes[j]] = best;
  }

  out.neighbors.assign(best_weight.begin(), best_weight.end());
  std::sort(out.neighbors.begin(), out.neighbors.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (out.neighbors.size() > limit) out.neighbors.resize(limit);
  return out;
}

std::vector<std::string> Expansion::expanded_set() const {
  std::vector<std::string> out = seeds_found;
  for (const auto& [name, _] : neighbors) out.push_back(name);
  return out;
}

void save_edges_tsv(const std::vector<Edge>& edges, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge file: " + path);
  out << "node_a\tnode_b\twpp\n";
  for (const auto& e : edges) out << e.a << '\t' << e.b << '\t' << io::fmt(e.w) << '\n';
}

}  // namespace ppimine::proxnet
