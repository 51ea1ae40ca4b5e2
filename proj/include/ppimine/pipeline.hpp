#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppimine/corpus.hpp"
#include "ppimine/eval.hpp"
#include "ppimine/features.hpp"
#include "ppimine/fusion.hpp"
#include "ppimine/lsi.hpp"
#include "ppimine/vtt.hpp"

namespace ppimine::pipeline {

// --- VTT -------------------------------------------------------------------

struct VttTrainOptions {
  vtt::FeatureKind kind = vtt::FeatureKind::cooccur;
  std::size_t k_words = 650;
  double lambda0 = 1.0;
  int beta = 15;
  vtt::CountMode count_mode = vtt::CountMode::presence;
};

vtt::VttModel train_vtt(const Corpus& corpus, const StopwordPolicy& policy,
                        const VttTrainOptions& options);

struct ClassifyRow {
  std::string id;
  vtt::VttDecision decision;
};

std::vector<ClassifyRow> classify_vtt(const Corpus& corpus, const vtt::VttModel& model,
                                      const StopwordPolicy& policy,
                                      const MentionRecognizer& recognizer,
                                      const vtt::BandCutoffs& cutoffs = {});

void write_classify_tsv(const std::vector<ClassifyRow>& rows, const std::string& path);

/// Single-abstract classification; the service route and the CLI share it.
struct ClassifyResponse {
  Label label = Label::negative;
  double confidence = 0.0;
  vtt::Band band = vtt::Band::low;
  int np = 0;
  double p_sum = 0.0;
  double n_sum = 0.0;
  double threshold = 0.0;
  std::string model_version;
};

ClassifyResponse classify_text(const std::string& text, const vtt::VttModel& model,
                               const StopwordPolicy& policy,
                               const MentionRecognizer& recognizer,
                               const vtt::BandCutoffs& cutoffs = {});

// --- LSI -------------------------------------------------------------------

struct LsiTrainOptions {
  std::size_t k_words = 650;
  std::size_t k_components = 100;
  std::size_t boundary_partitions = 8;  // 0: fit on whole-corpus self scores
  double test_fraction = 0.25;
  std::uint64_t seed = 0;
  lsi::BoundaryGrid boundary_grid;
};

lsi::LsiSpace train_lsi(const Corpus& corpus, const StopwordPolicy& policy,
                        const MentionRecognizer& recognizer, const LsiTrainOptions& options);

struct LsiRow {
  std::string id;
  lsi::PiNu scores;
  Label label = Label::negative;
  double margin = 0.0;  // pi - (m * nu + b)
};

std::vector<LsiRow> classify_lsi(const Corpus& corpus, const lsi::LsiSpace& space,
                                 const StopwordPolicy& policy,
                                 const MentionRecognizer& recognizer);

// --- uncertainty integration ------------------------------------------------

struct FusedOptions {
  std::size_t k_words = 650;
  fusion::VoteMode vote_mode = fusion::VoteMode::correctness_mask;
  std::vector<std::string> priority;  // tie order; defaults to input order
  vtt::BandCutoffs cutoffs;
};

struct FusedOutput {
  std::vector<ClassifyRow> rows;          // chosen label per document; margin = rank key
  std::vector<fusion::FusionRow> report;
};

/// Integrate any number of VTT models and optionally one LSI space: per
/// document the method with the least uncertain weighted vote wins.
FusedOutput classify_fused(const Corpus& test, const Corpus& train,
                           const std::vector<const vtt::VttModel*>& vtt_models,
                           const lsi::LsiSpace* space, const StopwordPolicy& policy,
                           const MentionRecognizer& recognizer, const FusedOptions& options);

// --- evaluation --------------------------------------------------------------

struct Evaluation {
  eval::Confusion confusion;
  eval::Metrics metrics;
  std::optional<double> auc;
};

Evaluation evaluate_rows(const std::vector<ClassifyRow>& rows, const Corpus& corpus);
void write_metrics_json(const Evaluation& evaluation, const std::string& path);

// --- full-text passage ranking ----------------------------------------------

struct RankPassagesOptions {
  std::size_t k_words = 650;
  std::size_t top_pairs = 1000;
  std::size_t top_sentence_features = 200;
  int iss_combination = 1;  // which combined ranking feeds the ISS listing
};

struct PassageOutputs {
  struct IpsRow {
    std::string doc_id;
    std::string m1, m2;
    std::size_t rank;
    int combination;
  };
  struct IssRow {
    std::string doc_id;
    std::size_t paragraph_index;
    std::size_t sentence_index;
    std::size_t rank;
  };
  std::vector<IpsRow> ips;
  std::vector<IssRow> iss;
};

PassageOutputs rank_passages(const Corpus& fulltexts, const Corpus& train_abstracts,
                             const Corpus& evidence, const StopwordPolicy& policy,
                             const MentionRecognizer& recognizer,
                             const RankPassagesOptions& options);

void write_ips_tsv(const std::vector<PassageOutputs::IpsRow>& rows, const std::string& path);
void write_iss_tsv(const std::vector<PassageOutputs::IssRow>& rows, const std::string& path);

}  // namespace ppimine::pipeline
