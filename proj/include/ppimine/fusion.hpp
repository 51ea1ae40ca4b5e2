#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppimine/corpus.hpp"
#include "ppimine/features.hpp"
#include "ppimine/la.hpp"

namespace ppimine::fusion {

/// Weighted-vote distribution over the two classes; rho_tp + rho_tn = 1.
struct VoteDistribution {
  double rho_tp = 0.5;
  double rho_tn = 0.5;
  bool degenerate = false;  // zero vote mass, forced to (0.5, 0.5)
};

/// Shannon entropy in bits, clamped into [0, 1]; 0 log 0 = 0.
double entropy_bits(const VoteDistribution& dist);

struct MethodPrediction {
  std::string method_id;
  Label label = Label::negative;
  double uncertainty = 0.0;  // bits, in [0, 1]
};

/// The prediction with minimal uncertainty wins; exact ties go to the method
/// appearing first in `priority` (methods absent from the priority list rank
/// after all listed ones, in input order).
MethodPrediction integrate(const std::vector<MethodPrediction>& predictions,
                           const std::vector<std::string>& priority);

/// Union of all three feature sets as one vector space. Coordinates are
/// per-document presence weighted by idf and the rows are unit-normalized;
/// the mention count is not part of this space.
struct CompoundSpace {
  std::vector<std::string> word_feats;
  std::vector<StemPair> bigram_feats;
  std::vector<StemPair> cooccur_feats;
  std::vector<double> idf;  // one entry per column
  la::Matrix train;         // docs x columns, unit rows
  std::vector<std::string> doc_ids;
  std::vector<Label> labels;
};

CompoundSpace build_compound_space(const PreparedCorpus& corpus, const WordFeatureSet& words);

std::vector<double> compound_vector(const PreparedDoc& doc, const CompoundSpace& space);

/// How per-method vote distributions are conditioned: on the documents that
/// method classified correctly in training, or shared across methods.
enum class VoteMode { correctness_mask, shared };

/// rho over training cosines, negative cosines clamped to 0. `mask` (when
/// given) restricts the vote to training documents with mask[t] set.
VoteDistribution vote_probs(std::span<const double> vec, const CompoundSpace& space,
                            const std::vector<bool>* mask = nullptr);

struct FusionRow {
  std::string id;
  MethodPrediction chosen;
  std::vector<MethodPrediction> per_method;
};

/// JSONL, one object per document:
///   {"id", "chosen_method", "label", "U", "per_method": [{"method","label","U"}]}
void save_fusion_report(const std::vector<FusionRow>& rows, const std::string& path);

}  // namespace ppimine::fusion
