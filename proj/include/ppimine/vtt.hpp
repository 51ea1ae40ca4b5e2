#pragma once

#include <map>
#include <string>
#include <vector>

#include "ppimine/corpus.hpp"
#include "ppimine/features.hpp"

namespace ppimine::vtt {

enum class FeatureKind { word, bigram_plus, cooccur };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

/// Unit vector of a feature's (p_tp, p_tn) point: cos weighs the positive
/// vote, sin the negative one. Throws when both probabilities are zero.
struct TermWeight {
  double cos = 0.0;
  double sin = 0.0;
};

TermWeight term_weight(double p_tp, double p_tn);

/// Whether a matched feature contributes once per document or once per
/// occurrence to the vote sums. Co-occurrence features are inherently
/// presence-like and ignore the occurrence setting.
enum class CountMode { presence, occurrence };

struct VttModel {
  FeatureKind kind = FeatureKind::word;
  double lambda0 = 1.0;
  int beta = 15;
  CountMode count_mode = CountMode::presence;
  std::vector<std::string> filter_words;          // the selected word vocabulary, rank order
  std::map<std::string, TermWeight> word_weights; // kind == word
  std::map<StemPair, TermWeight> pair_weights;    // pair kinds
  std::string model_version;

  // selection-time statistics, kept for export
  std::vector<WordStat> word_stats;
  std::vector<PairStat> pair_stats;
};

/// Train a model on a prepared labeled corpus: select the top-K words, build
/// the feature set of the requested kind and weigh every feature.
VttModel train(const PreparedCorpus& corpus, FeatureKind kind, std::size_t k_words,
               double lambda0, int beta, CountMode mode = CountMode::presence);

struct SumScores {
  double p_sum = 0.0;
  double n_sum = 0.0;
};

/// Eq-style vote sums over the document's matched features.
SumScores score(const PreparedDoc& doc, const VttModel& model);

enum class Band { low, medium, high };

std::string to_string(Band band);

struct BandCutoffs {
  double low_max = 0.1;
  double high_min = 0.5;
};

Band band_of(double confidence, const BandCutoffs& cutoffs = {});

/// Confidence assigned when the ratio is infinite (all-positive evidence).
inline constexpr double kMaxConfidence = 10.0;

struct VttDecision {
  Label label = Label::negative;
  double p_sum = 0.0;
  double n_sum = 0.0;
  int np = 0;
  double threshold = 0.0;
  double ratio = 0.0;       // P/N under the documented conventions
  double margin = 0.0;      // ratio - threshold; the single rankable score
  double confidence = 0.0;
  Band band = Band::low;
  bool confidence_defined = true;  // false when the threshold is zero
  bool no_evidence = false;        // no feature matched: negative, band low
};

double threshold_value(double lambda0, int beta, int np);

/// The decision function itself, on precomputed sums. Conventions:
/// N = 0 with P > 0 classifies positive with confidence capped at
/// kMaxConfidence; P = N = 0 classifies negative with the band forced low.
VttDecision decide(double p_sum, double n_sum, int np, double lambda0, int beta,
                   const BandCutoffs& cutoffs = {});

VttDecision classify(const PreparedDoc& doc, const VttModel& model, int np,
                     const BandCutoffs& cutoffs = {});

/// Batch classification; np per document comes from the recognizer.
std::vector<VttDecision> classify_corpus(const PreparedCorpus& corpus, const VttModel& model,
                                         const MentionRecognizer& recognizer,
                                         const BandCutoffs& cutoffs = {});
std::vector<VttDecision> classify_corpus_serial(const PreparedCorpus& corpus,
                                                const VttModel& model,
                                                const MentionRecognizer& recognizer,
                                                const BandCutoffs& cutoffs = {});

/// Within each predicted class, indices ordered by decreasing |margin|,
/// ties by document id.
struct Ranking {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
};

Ranking rank(const std::vector<VttDecision>& decisions, const std::vector<std::string>& ids);

/// Single JSON document; reloading reproduces the decision function exactly.
void save_model(const VttModel& model, const std::string& path);
VttModel load_model(const std::string& path);

}  // namespace ppimine::vtt
