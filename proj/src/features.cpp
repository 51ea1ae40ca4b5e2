#include "ppimine/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ppimine/io.hpp"

namespace ppimine {

WordFeatureSet::WordFeatureSet(std::vector<WordStat> ranked, bool short_of_k)
    : ranked_(std::move(ranked)), short_of_k_(short_of_k) {
  for (const auto& w : ranked_) members_.insert(w.stem);
}

namespace {

std::string fold(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }

}  // namespace

LexiconRecognizer::LexiconRecognizer(const std::vector<std::string>& names) {
  for (const auto& n : names) {
    std::string f = fold(n);
    if (f.empty()) continue;
    max_len_ = std::max(max_len_, f.size());
    names_.insert(std::move(f));
  }
}

LexiconRecognizer LexiconRecognizer::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) names.push_back(line);
  }
  return LexiconRecognizer(names);
}

std::vector<std::string> LexiconRecognizer::mentions_in(std::string_view text) const {
  std::vector<std::string> out;
  if (names_.empty()) return out;
  std::string folded = fold(text);
  std::size_t n = folded.size();
  std::size_t i = 0;
  while (i < n) {
    if (i > 0 && is_word_char(static_cast<unsigned char>(folded[i - 1]))) {
      ++i;
      continue;
    }
    // longest candidate first
    std::size_t best = 0;
    std::size_t cap = std::min(max_len_, n - i);
    for (std::size_t len = cap; len >= 1; --len) {
      if (i + len < n && is_word_char(static_cast<unsigned char>(folded[i + len]))) continue;
      if (names_.count(folded.substr(i, len))) {
        best = len;
        break;
      }
    }
    if (best > 0) {
      out.push_back(folded.substr(i, best));
      i += best;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<std::string> LexiconRecognizer::mentions(const Document&,
                                                     std::string_view text) const {
  return mentions_in(text);
}

PrecomputedRecognizer PrecomputedRecognizer::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mentions file: " + path);
  std::map<std::string, std::vector<std::string>> by_doc;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("mentions"))
      throw std::runtime_error("mentions parse error at line " + std::to_string(line_no));
    auto& v = by_doc[j["id"].get<std::string>()];
    for (const auto& m : j["mentions"]) v.push_back(m.get<std::string>());
  }
  PrecomputedRecognizer rec;
  for (const auto& [id, names] : by_doc)
    rec.matchers_.emplace(id, std::make_shared<LexiconRecognizer>(names));
  return rec;
}

std::vector<std::string> PrecomputedRecognizer::mentions(const Document& doc,
                                                         std::string_view text) const {
  auto it = matchers_.find(doc.id);
  if (it == matchers_.end()) return {};
  return it->second->mentions_in(text);
}

namespace features {

std::map<std::string, WordStat> word_class_probs(const PreparedCorpus& corpus) {
  std::size_t n_pos = corpus.corpus->count(Label::positive);
  std::size_t n_neg = corpus.corpus->count(Label::negative);
  if (n_pos == 0 || n_neg == 0)
    throw std::runtime_error("word_class_probs needs at least one document of each class");

  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // stem -> (pos, neg)
  for (const auto& pd : corpus.docs) {
    if (pd.doc->label == Label::unlabeled) continue;
    std::set<std::string> present(pd.stems.begin(), pd.stems.end());
    for (const auto& s : present) {
      auto& c = counts[s];
      if (pd.doc->label == Label::positive)
        ++c.first;
      else
        ++c.second;
    }
  }

  std::map<std::string, WordStat> out;
  for (const auto& [stem, c] : counts) {
    WordStat w;
    w.stem = stem;
    w.p_tp = static_cast<double>(c.first) / static_cast<double>(n_pos);
    w.p_tn = static_cast<double>(c.second) / static_cast<double>(n_neg);
    w.s = std::abs(w.p_tp - w.p_tn);
    out.emplace(stem, std::move(w));
  }
  return out;
}

WordFeatureSet select_top_words(const std::map<std::string, WordStat>& stats, std::size_t k) {
  if (k == 0) throw std::invalid_argument("select_top_words: K must be >= 1");
  std::vector<WordStat> all;
  all.reserve(stats.size());
  for (const auto& [_, w] : stats) all.push_back(w);
  std::sort(all.begin(), all.end(), [](const WordStat& a, const WordStat& b) {
    if (a.s != b.s) return a.s > b.s;
    return a.stem < b.stem;
  });
  bool short_of_k = all.size() < k;
  if (all.size() > k) all.resize(k);
  return WordFeatureSet(std::move(all), short_of_k);
}

std::vector<std::string> filter_document(const std::vector<std::string>& stems,
                                         const WordFeatureSet& features) {
  std::vector<std::string> out;
  for (const auto& s : stems)
    if (features.contains(s)) out.push_back(s);
  return out;
}

namespace {

template <typename PairsOfDoc>
std::map<StemPair, PairStat> pair_probs(const PreparedCorpus& corpus, PairKind kind,
                                        PairsOfDoc pairs_of_doc) {
  std::size_t n_pos = corpus.corpus->count(Label::positive);
  std::size_t n_neg = corpus.corpus->count(Label::negative);
  if (n_pos == 0 || n_neg == 0)
    throw std::runtime_error("pair statistics need at least one document of each class");

  std::map<StemPair, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& pd : corpus.docs) {
    if (pd.doc->label == Label::unlabeled) continue;
    for (const auto& p : pairs_of_doc(pd)) {
      auto& c = counts[p];
      if (pd.doc->label == Label::positive)
        ++c.first;
      else
        ++c.second;
    }
  }

  std::map<StemPair, PairStat> out;
  for (const auto& [pair, c] : counts) {
    PairStat st;
    st.pair = pair;
    st.kind = kind;
    st.p_tp = static_cast<double>(c.first) / static_cast<double>(n_pos);
    st.p_tn = static_cast<double>(c.second) / static_cast<double>(n_neg);
    st.s_ab = std::abs(st.p_tp - st.p_tn);
    out.emplace(pair, std::move(st));
  }
  return out;
}

}  // namespace

std::set<StemPair> doc_bigrams(const std::vector<std::string>& filtered) {
  std::set<StemPair> pairs;
  for (std::size_t i = 0; i + 1 < filtered.size(); ++i)
    pairs.insert(StemPair{filtered[i], filtered[i + 1]});
  return pairs;
}

std::set<StemPair> doc_cooccur(const std::vector<std::string>& filtered) {
  std::set<std::string> distinct(filtered.begin(), filtered.end());
  std::set<StemPair> pairs;
  for (auto it = distinct.begin(); it != distinct.end(); ++it)
    for (auto jt = std::next(it); jt != distinct.end(); ++jt)
      pairs.insert(StemPair{*it, *jt});
  return pairs;
}

std::map<StemPair, PairStat> bigrams_plus(const PreparedCorpus& corpus,
                                          const WordFeatureSet& features) {
  return pair_probs(corpus, PairKind::bigram_plus, [&](const PreparedDoc& pd) {
    return doc_bigrams(filter_document(pd.stems, features));
  });
}

std::map<StemPair, PairStat> cooccur_pairs(const PreparedCorpus& corpus,
                                           const WordFeatureSet& features) {
  return pair_probs(corpus, PairKind::cooccur, [&](const PreparedDoc& pd) {
    return doc_cooccur(filter_document(pd.stems, features));
  });
}

std::vector<std::string> distinct_mentions(const Document& doc, std::string_view text,
                                           const MentionRecognizer& recognizer) {
  std::set<std::string> distinct;
  for (auto& m : recognizer.mentions(doc, text)) distinct.insert(fold(m));
  return {distinct.begin(), distinct.end()};
}

int count_mentions(const Document& doc, const MentionRecognizer& recognizer) {
  return static_cast<int>(distinct_mentions(doc, doc.text, recognizer).size());
}

void save_feature_tsv(const WordFeatureSet& features, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write feature file: " + path);
  out << "feature\tp_tp\tp_tn\tscore\trank\n";
  std::size_t rank = 1;
  for (const auto& w : features.ranked())
    out << w.stem << '\t' << io::fmt(w.p_tp) << '\t' << io::fmt(w.p_tn) << '\t' << io::fmt(w.s)
        << '\t' << rank++ << '\n';
}

void save_pair_tsv(const std::map<StemPair, PairStat>& pairs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write pair file: " + path);
  out << "feature\tp_tp\tp_tn\tscore\trank\n";
  std::vector<const PairStat*> ranked;
  ranked.reserve(pairs.size());
  for (const auto& [_, st] : pairs) ranked.push_back(&st);
  std::sort(ranked.begin(), ranked.end(), [](const PairStat* a, const PairStat* b) {
    if (a->s_ab != b->s_ab) return a->s_ab > b->s_ab;
    return a->pair < b->pair;
  });
  std::size_t rank = 1;
  for (const auto* st : ranked)
    out << st->pair.a << ',' << st->pair.b << '\t' << io::fmt(st->p_tp) << '\t'
        << io::fmt(st->p_tn) << '\t' << io::fmt(st->s_ab) << '\t' << rank++ << '\n';
}

void save_score_histogram(const std::map<std::string, WordStat>& stats, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write histogram file: " + path);
  out << "stem\trank\tscore\n";
  std::vector<const WordStat*> ranked;
  ranked.reserve(stats.size());
  for (const auto& [_, w] : stats) ranked.push_back(&w);
  std::sort(ranked.begin(), ranked.end(), [](const WordStat* a, const WordStat* b) {
    if (a->s != b->s) return a->s > b->s;
    return a->stem < b->stem;
  });
  std::size_t rank = 1;
  for (const auto* w : ranked) out << w->stem << '\t' << rank++ << '\t' << io::fmt(w->s) << '\n';
}

}  // namespace features
}  // namespace ppimine
