#pragma once

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ppimine/corpus.hpp"

namespace ppimine {

/// Per-stem class-conditional presence probabilities and the selection score
/// s = |p_tp - p_tn|.
struct WordStat {
  std::string stem;
  double p_tp = 0.0;
  double p_tn = 0.0;
  double s = 0.0;
};

struct StemPair {
  std::string a, b;
  auto operator<=>(const StemPair&) const = default;
};

enum class PairKind { bigram_plus, cooccur };

struct PairStat {
  StemPair pair;
  double p_tp = 0.0;
  double p_tn = 0.0;
  double s_ab = 0.0;
  PairKind kind = PairKind::cooccur;
};

/// Top-K stems ordered by descending s (rank 1 first), ties broken
/// lexicographically.
class WordFeatureSet {
 public:
  WordFeatureSet() = default;
  WordFeatureSet(std::vector<WordStat> ranked, bool short_of_k);

  const std::vector<WordStat>& ranked() const { return ranked_; }
  bool short_of_k() const { return short_of_k_; }
  bool contains(const std::string& stem) const { return members_.count(stem) > 0; }
  std::size_t size() const { return ranked_.size(); }

 private:
  std::vector<WordStat> ranked_;
  std::set<std::string> members_;
  bool short_of_k_ = false;
};

/// Mention spotting over raw (pre-stemming) text. Implementations are
/// case-insensitive; `text` is the snippet to scan and `doc` supplies
/// identity for precomputed sources.
class MentionRecognizer {
 public:
  virtual ~MentionRecognizer() = default;
  virtual std::vector<std::string> mentions(const Document& doc, std::string_view text) const = 0;
};

/// Longest-match lexicon recognizer. Matches are case-insensitive and must
/// not touch adjacent letters or digits.
class LexiconRecognizer : public MentionRecognizer {
 public:
  explicit LexiconRecognizer(const std::vector<std::string>& names);
  static LexiconRecognizer from_file(const std::string& path);  // one name per line

  std::vector<std::string> mentions(const Document& doc, std::string_view text) const override;
  std::vector<std::string> mentions_in(std::string_view text) const;

 private:
  std::set<std::string> names_;     // case-folded
  std::size_t max_len_ = 0;
};

/// Recognizer backed by precomputed output, JSONL {"id": str, "mentions": [str]}.
/// Snippet-level queries match the document's mention strings within the text.
/// Matchers are built at load time; queries are read-only and parallel-safe.
class PrecomputedRecognizer : public MentionRecognizer {
 public:
  static PrecomputedRecognizer from_file(const std::string& path);

  std::vector<std::string> mentions(const Document& doc, std::string_view text) const override;

 private:
  std::map<std::string, std::shared_ptr<LexiconRecognizer>> matchers_;
};

class NullRecognizer : public MentionRecognizer {
 public:
  std::vector<std::string> mentions(const Document&, std::string_view) const override {
    return {};
  }
};

namespace features {

/// Document-level presence probabilities for every stem in the corpus.
/// Throws when either class is empty.
std::map<std::string, WordStat> word_class_probs(const PreparedCorpus& corpus);

/// K stems with largest s; ties lexicographic ascending. When K exceeds the
/// vocabulary the whole vocabulary is returned flagged short. K must be >= 1.
WordFeatureSet select_top_words(const std::map<std::string, WordStat>& stats, std::size_t k);

/// Subsequence of the stem sequence retaining only feature-set members.
std::vector<std::string> filter_document(const std::vector<std::string>& stems,
                                         const WordFeatureSet& features);

/// Distinct ordered adjacent pairs of one filtered stem sequence.
std::set<StemPair> doc_bigrams(const std::vector<std::string>& filtered);

/// Distinct unordered pairs (a < b) of one filtered stem sequence.
std::set<StemPair> doc_cooccur(const std::vector<std::string>& filtered);

/// Ordered adjacent stem pairs in the filtered documents, with document-level
/// presence probabilities.
std::map<StemPair, PairStat> bigrams_plus(const PreparedCorpus& corpus,
                                          const WordFeatureSet& features);

/// Unordered pairs of distinct feature stems co-occurring in the same
/// filtered document (stored with a <= b).
std::map<StemPair, PairStat> cooccur_pairs(const PreparedCorpus& corpus,
                                           const WordFeatureSet& features);

/// Count of distinct case-folded mention strings in the document's raw text.
int count_mentions(const Document& doc, const MentionRecognizer& recognizer);

/// Case-folded distinct mentions, sorted.
std::vector<std::string> distinct_mentions(const Document& doc, std::string_view text,
                                           const MentionRecognizer& recognizer);

/// TSV rows (stem-or-pair, p_tp, p_tn, score, rank) for persistence.
void save_feature_tsv(const WordFeatureSet& features, const std::string& path);
void save_pair_tsv(const std::map<StemPair, PairStat>& pairs, const std::string& path);

/// TSV (stem, rank, s) over the whole vocabulary: the ranked-score diagnostic
/// used to choose the feature-count cutoff.
void save_score_histogram(const std::map<std::string, WordStat>& stats, const std::string& path);

}  // namespace features
}  // namespace ppimine
