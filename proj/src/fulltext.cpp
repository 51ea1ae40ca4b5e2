#include "ppimine/fulltext.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace ppimine::fulltext {

double ppi_pair_score(double p_tp, double p_tn) {
  if (p_tp == 0.0) return 0.0;
  if (p_tn == 0.0) return p_tp;
  return p_tp * p_tp / std::hypot(p_tp, p_tn);
}

std::vector<PairPpiScore> pair_ppi_scores(const std::map<StemPair, PairStat>& stats,
                                          std::size_t top_n) {
  std::vector<PairPpiScore> out;
  out.reserve(stats.size());
  for (const auto& [pair, st] : stats)
    out.push_back({pair, ppi_pair_score(st.p_tp, st.p_tn), 0});
  std::sort(out.begin(), out.end(), [](const PairPpiScore& a, const PairPpiScore& b) {
    if (a.p != b.p) return a.p > b.p;
    return a.pair < b.pair;
  });
  if (out.size() > top_n) out.resize(top_n);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

double sentence_feature_score(double f_ppi, double f_c) {
  if (f_ppi == 0.0) return 0.0;
  if (f_c == 0.0) return f_ppi;
  return f_ppi * f_ppi / std::hypot(f_ppi, f_c);
}

std::vector<SentenceFeature> sentence_features(const PreparedCorpus& evidence,
                                               const PreparedCorpus& full_corpus,
                                               std::size_t top_n) {
  std::map<std::string, double> f_ppi, f_c;
  for (const auto& pd : evidence.docs)
    for (const auto& s : pd.stems) f_ppi[s] += 1.0;
  for (const auto& pd : full_corpus.docs)
    for (const auto& s : pd.stems) f_c[s] += 1.0;

  std::vector<SentenceFeature> out;
  for (const auto& [stem, fp] : f_ppi) {
    SentenceFeature sf;
    sf.stem = stem;
    sf.f_ppi = fp;
    auto it = f_c.find(stem);
    sf.f_c = it == f_c.end() ? 0.0 : it->second;
    sf.ss = sentence_feature_score(sf.f_ppi, sf.f_c);
    out.push_back(std::move(sf));
  }
  std::sort(out.begin(), out.end(), [](const SentenceFeature& a, const SentenceFeature& b) {
    if (a.ss != b.ss) return a.ss > b.ss;
    return a.stem < b.stem;
  });
  if (out.size() > top_n) out.resize(top_n);
  return out;
}

namespace {

const std::set<std::string>& abbreviation_guard() {
  static const std::set<std::string> guard = {
      "al",  "approx", "ca",  "cf",  "dr",  "ed",  "eds", "eg", "et",  "etc", "fig",
      "figs", "ie",    "inc", "mr",  "mrs", "ms",  "no",  "pp", "prof", "ref", "refs",
      "sec", "st",     "tab", "vol", "vols", "vs"};
  return guard;
}

// token of letters immediately before position `i` (exclusive), lowercased
std::string word_before(std::string_view text, std::size_t i) {
  std::size_t e = i;
  std::size_t b = e;
  while (b > 0 && std::isalpha(static_cast<unsigned char>(text[b - 1]))) --b;
  std::string w;
  for (std::size_t k = b; k < e; ++k)
    w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
  return w;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view paragraph) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t n = paragraph.size();
  for (std::size_t i = 0; i < n; ++i) {
    char c = paragraph[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    if (j >= n || !std::isspace(static_cast<unsigned char>(paragraph[j]))) continue;
    while (j < n && std::isspace(static_cast<unsigned char>(paragraph[j]))) ++j;
    if (j >= n) continue;
    unsigned char next = static_cast<unsigned char>(paragraph[j]);
    if (!std::isupper(next) && !std::isdigit(next)) continue;
    if (c == '.') {
      std::string prev = word_before(paragraph, i);
      if (prev.size() == 1) continue;  // single-letter initial, "J. Smith"
      if (abbreviation_guard().count(prev)) continue;
    }
    out.emplace_back(paragraph.substr(start, i + 1 - start));
    start = j;
  }
  if (start < n) {
    std::string_view tail = paragraph.substr(start);
    std::size_t b = 0;
    while (b < tail.size() && std::isspace(static_cast<unsigned char>(tail[b]))) ++b;
    if (b < tail.size()) out.emplace_back(tail.substr(b));
  }
  return out;
}

namespace {

// dense ranks from weights: weight 0 excluded, ties by paragraph order
std::vector<std::size_t> ranks_from_weights(const std::vector<double>& weights) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  std::vector<std::size_t> ranks(weights.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r + 1;
  return ranks;
}

}  // namespace

CriterionRanks rank_paragraphs(const PreparedDoc& doc,
                               const std::vector<PairPpiScore>& pair_scores,
                               const std::vector<int>& mention_counts,
                               const std::set<std::string>& sentence_feature_set) {
  std::size_t n = doc.para_stems.size();
  if (mention_counts.size() != n)
    throw std::invalid_argument("rank_paragraphs: mention_counts must align with paragraphs");

  CriterionRanks out;
  out.weight_a.assign(n, 0.0);
  std::vector<double> weight_b(n, 0.0), weight_c(n, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    std::set<std::string> present(doc.para_stems[k].begin(), doc.para_stems[k].end());
    // A: each matched pair contributes the inverse of its global rank, once
    for (const auto& ps : pair_scores)
      if (present.count(ps.pair.a) && present.count(ps.pair.b))
        out.weight_a[k] += 1.0 / static_cast<double>(ps.rank);
    weight_b[k] = static_cast<double>(mention_counts[k]);
    // C: every distinct sentence feature present adds 1
    for (const auto& f : sentence_feature_set)
      if (present.count(f)) weight_c[k] += 1.0;
  }

  out.rank_a = ranks_from_weights(out.weight_a);
  out.rank_b = ranks_from_weights(weight_b);
  out.rank_c = ranks_from_weights(weight_c);
  return out;
}

namespace {

std::vector<std::size_t> ordinal_from_products(const std::vector<std::uint64_t>& products) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < products.size(); ++i)
    if (products[i] > 0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return products[a] < products[b]; });
  std::vector<std::size_t> ranks(products.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r + 1;
  return ranks;
}

}  // namespace

CombinedRanks combine_ranks(const CriterionRanks& ranks) {
  std::size_t n = ranks.rank_a.size();
  CombinedRanks out;
  out.product1.assign(n, 0);
  out.product2.assign(n, 0);
  out.product3.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t a = ranks.rank_a[i], b = ranks.rank_b[i], c = ranks.rank_c[i];
    if (a && b) out.product1[i] = a * b;
    if (b && c) out.product2[i] = b * c;
    if (a && b && c) out.product3[i] = a * b * c;
  }
  out.rank1 = ordinal_from_products(out.product1);
  out.rank2 = ordinal_from_products(out.product2);
  out.rank3 = ordinal_from_products(out.product3);
  return out;
}

std::vector<ExtractedPair> extract_pairs(const Document& doc,
                                         const std::vector<std::size_t>& paragraph_ranks,
                                         const MentionRecognizer& recognizer) {
  if (paragraph_ranks.size() != doc.paragraphs.size())
    throw std::invalid_argument("extract_pairs: ranks must align with paragraphs");

  struct Where {
    std::size_t rank, para, sent;
    bool operator<(const Where& o) const {
      return std::tie(rank, para, sent) < std::tie(o.rank, o.para, o.sent);
    }
  };
  std::map<std::pair<std::string, std::string>, Where> best;

  for (std::size_t k = 0; k < doc.paragraphs.size(); ++k) {
    if (paragraph_ranks[k] == 0) continue;
    std::vector<std::string> sentences = split_sentences(doc.paragraphs[k]);
    for (std::size_t si = 0; si < sentences.size(); ++si) {
      std::vector<std::string> ms =
          features::distinct_mentions(doc, sentences[si], recognizer);
      for (std::size_t i = 0; i < ms.size(); ++i) {
        for (std::size_t j = i + 1; j < ms.size(); ++j) {
          auto key = std::make_pair(ms[i], ms[j]);
          Where w{paragraph_ranks[k], k, si};
          auto it = best.find(key);
          if (it == best.end() || w < it->second) best[key] = w;
        }
      }
    }
  }

  std::vector<ExtractedPair> out;
  for (const auto& [key, w] : best)
    out.push_back({doc.id, key.first, key.second, w.rank, w.para, w.sent});
  std::sort(out.begin(), out.end(), [](const ExtractedPair& a, const ExtractedPair& b) {
    return std::tie(a.rank, a.m1, a.m2) < std::tie(b.rank, b.m1, b.m2);
  });
  return out;
}

}  // namespace ppimine::fulltext
