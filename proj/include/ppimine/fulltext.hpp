#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ppimine/corpus.hpp"
#include "ppimine/features.hpp"

namespace ppimine::fulltext {

/// p_tp^2 / sqrt(p_tp^2 + p_tn^2); by construction p = p_tp when p_tn = 0,
/// and p = 0 when p_tp = 0.
double ppi_pair_score(double p_tp, double p_tn);

struct PairPpiScore {
  StemPair pair;
  double p = 0.0;
  std::size_t rank = 0;  // 1 = best
};

/// Top-n pairs by descending score, ties lexicographic.
std::vector<PairPpiScore> pair_ppi_scores(const std::map<StemPair, PairStat>& stats,
                                          std::size_t top_n = 1000);

/// f_ppi^2 / sqrt(f_ppi^2 + f_c^2) on raw stem counts.
double sentence_feature_score(double f_ppi, double f_c);

struct SentenceFeature {
  std::string stem;
  double f_ppi = 0.0;
  double f_c = 0.0;
  double ss = 0.0;
};

/// Top-n stems of the evidence collection scored against the full corpus
/// frequencies; descending ss, ties lexicographic.
std::vector<SentenceFeature> sentence_features(const PreparedCorpus& evidence,
                                               const PreparedCorpus& full_corpus,
                                               std::size_t top_n = 200);

/// Sentence boundary: . ! or ? followed by whitespace and an uppercase letter
/// or digit, guarded against common abbreviations and single-letter initials.
std::vector<std::string> split_sentences(std::string_view paragraph);

/// Per-criterion paragraph ranks; 0 marks a paragraph thrown out by that
/// criterion. Included paragraphs get dense ranks 1..n, ties broken by
/// paragraph order.
struct CriterionRanks {
  std::vector<std::size_t> rank_a;  // inverse-rank-weighted pair matches
  std::vector<std::size_t> rank_b;  // distinct protein mentions
  std::vector<std::size_t> rank_c;  // distinct sentence features
  std::vector<double> weight_a;     // the criterion-A sums, for inspection
};

CriterionRanks rank_paragraphs(const PreparedDoc& doc,
                               const std::vector<PairPpiScore>& pair_scores,
                               const std::vector<int>& mention_counts,
                               const std::set<std::string>& sentence_feature_set);

/// Rank products of A*B, B*C and A*B*C, plus the resulting orderings.
/// A paragraph thrown out by any constituent is excluded from that
/// combination; ordering is ascending product, ties by paragraph order.
struct CombinedRanks {
  std::vector<std::uint64_t> product1, product2, product3;  // 0 = excluded
  std::vector<std::size_t> rank1, rank2, rank3;             // ordinal, 0 = excluded
};

CombinedRanks combine_ranks(const CriterionRanks& ranks);

struct ExtractedPair {
  std::string doc_id;
  std::string m1, m2;  // case-folded, m1 < m2, distinct
  std::size_t rank = 0;            // ordinal rank of the best containing paragraph
  std::size_t paragraph_index = 0; // 0-based, paragraph realizing that rank
  std::size_t sentence_index = 0;  // 0-based within the paragraph
};

/// All distinct mention pairs co-occurring within a sentence of a surviving
/// paragraph, ranked by the best containing paragraph.
std::vector<ExtractedPair> extract_pairs(const Document& doc,
                                         const std::vector<std::size_t>& paragraph_ranks,
                                         const MentionRecognizer& recognizer);

}  // namespace ppimine::fulltext
