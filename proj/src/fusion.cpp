#include "ppimine/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "ppimine/vtt.hpp"

namespace ppimine::fusion {

double entropy_bits(const VoteDistribution& dist) {
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  double u = term(dist.rho_tp) + term(dist.rho_tn);
  return std::clamp(u, 0.0, 1.0);
}

MethodPrediction integrate(const std::vector<MethodPrediction>& predictions,
                           const std::vector<std::string>& priority) {
  if (predictions.empty()) throw std::invalid_argument("integrate: no predictions");
  auto priority_of = [&](const std::string& id) {
    for (std::size_t i = 0; i < priority.size(); ++i)
      if (priority[i] == id) return i;
    return priority.size();
  };
  const MethodPrediction* best = &predictions.front();
  for (const auto& p : predictions) {
    if (p.uncertainty < best->uncertainty) best = &p;
    else if (p.uncertainty == best->uncertainty &&
             priority_of(p.method_id) < priority_of(best->method_id))
      best = &p;
  }
  return *best;
}

CompoundSpace build_compound_space(const PreparedCorpus& corpus, const WordFeatureSet& words) {
  CompoundSpace space;
  for (const auto& w : words.ranked()) space.word_feats.push_back(w.stem);
  std::sort(space.word_feats.begin(), space.word_feats.end());

  auto bigram_stats = features::bigrams_plus(corpus, words);
  auto cooccur_stats = features::cooccur_pairs(corpus, words);
  for (const auto& [p, _] : bigram_stats) space.bigram_feats.push_back(p);
  for (const auto& [p, _] : cooccur_stats) space.cooccur_feats.push_back(p);

  std::size_t cols = space.word_feats.size() + space.bigram_feats.size() +
                     space.cooccur_feats.size();

  // document frequencies per column
  std::vector<std::size_t> df(cols, 0);
  std::size_t n_docs = corpus.size();
  std::map<std::string, std::size_t> word_col;
  std::map<StemPair, std::size_t> bigram_col, cooccur_col;
  for (std::size_t j = 0; j < space.word_feats.size(); ++j) word_col[space.word_feats[j]] = j;
  std::size_t base = space.word_feats.size();
  for (std::size_t j = 0; j < space.bigram_feats.size(); ++j)
    bigram_col[space.bigram_feats[j]] = base + j;
  base += space.bigram_feats.size();
  for (std::size_t j = 0; j < space.cooccur_feats.size(); ++j)
    cooccur_col[space.cooccur_feats[j]] = base + j;

  auto doc_columns = [&](const PreparedDoc& pd) {
    std::vector<std::size_t> present;
    std::vector<std::string> filtered;
    for (const auto& s : pd.stems)
      if (word_col.count(s)) filtered.push_back(s);
    std::set<std::string> distinct(filtered.begin(), filtered.end());
    for (const auto& s : distinct) present.push_back(word_col.at(s));
    for (const auto& p : features::doc_bigrams(filtered)) {
      auto it = bigram_col.find(p);
      if (it != bigram_col.end()) present.push_back(it->second);
    }
    for (const auto& p : features::doc_cooccur(filtered)) {
      auto it = cooccur_col.find(p);
      if (it != cooccur_col.end()) present.push_back(it->second);
    }
    return present;
  };

  std::vector<std::vector<std::size_t>> per_doc(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    per_doc[i] = doc_columns(corpus.docs[i]);
    for (std::size_t j : per_doc[i]) ++df[j];
  }
  space.idf.resize(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j)
    if (df[j] > 0)
      space.idf[j] = std::log(static_cast<double>(n_docs) / static_cast<double>(df[j]));

  space.train = la::Matrix(corpus.size(), cols);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    space.doc_ids.push_back(corpus.docs[i].doc->id);
    space.labels.push_back(corpus.docs[i].doc->label);
    auto row = space.train.row(i);
    for (std::size_t j : per_doc[i]) row[j] = space.idf[j];
    double n = la::norm(row);
    if (n > 0.0)
      for (auto& x : row) x /= n;
  }
  return space;
}

std::vector<double> compound_vector(const PreparedDoc& doc, const CompoundSpace& space) {
  std::size_t cols = space.idf.size();
  std::vector<double> v(cols, 0.0);

  std::map<std::string, std::size_t> word_col;
  for (std::size_t j = 0; j < space.word_feats.size(); ++j) word_col[space.word_feats[j]] = j;
  std::vector<std::string> filtered;
  for (const auto& s : doc.stems)
    if (word_col.count(s)) filtered.push_back(s);
  std::set<std::string> distinct(filtered.begin(), filtered.end());
  for (const auto& s : distinct) v[word_col.at(s)] = 1.0;

  std::size_t base = space.word_feats.size();
  auto bigrams = features::doc_bigrams(filtered);
  for (std::size_t j = 0; j < space.bigram_feats.size(); ++j)
    if (bigrams.count(space.bigram_feats[j])) v[base + j] = 1.0;
  base += space.bigram_feats.size();
  auto cooccurs = features::doc_cooccur(filtered);
  for (std::size_t j = 0; j < space.cooccur_feats.size(); ++j)
    if (cooccurs.count(space.cooccur_feats[j])) v[base + j] = 1.0;

  for (std::size_t j = 0; j < cols; ++j) v[j] *= space.idf[j];
  double n = la::norm(v);
  if (n > 0.0)
    for (auto& x : v) x /= n;
  return v;
}

VoteDistribution vote_probs(std::span<const double> vec, const CompoundSpace& space,
                            const std::vector<bool>* mask) {
  if (mask && mask->size() != space.train.rows())
    throw std::invalid_argument("vote_probs: mask must align with training documents");
  double sum_tp = 0.0, sum_tn = 0.0;
  for (std::size_t t = 0; t < space.train.rows(); ++t) {
    if (mask && !(*mask)[t]) continue;
    Label label = space.labels[t];
    if (label == Label::unlabeled) continue;
    double c = la::cosine(vec, space.train.row(t));
    if (c < 0.0) c = 0.0;  // guard against signed coordinates
    (label == Label::positive ? sum_tp : sum_tn) += c;
  }
  double total = sum_tp + sum_tn;
  VoteDistribution d;
  if (total == 0.0) {
    d.degenerate = true;  // maximal uncertainty
    return d;
  }
  d.rho_tp = sum_tp / total;
  d.rho_tn = sum_tn / total;
  return d;
}

void save_fusion_report(const std::vector<FusionRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write fusion report: " + path);
  for (const auto& row : rows) {
    nlohmann::json j;
    j["id"] = row.id;
    j["chosen_method"] = row.chosen.method_id;
    j["label"] = to_string(row.chosen.label);
    j["U"] = row.chosen.uncertainty;
    nlohmann::json per = nlohmann::json::array();
    for (const auto& m : row.per_method)
      per.push_back({{"method", m.method_id},
                     {"label", to_string(m.label)},
                     {"U", m.uncertainty}});
    j["per_method"] = std::move(per);
    out << j.dump() << '\n';
  }
}

}  // namespace ppimine::fusion
