#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppimine/corpus.hpp"
#include "ppimine/vtt.hpp"

namespace ppimine::eval {

struct Confusion {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  long total() const { return tp + fp + tn + fn; }
};

/// Counts from id-aligned predictions and reference labels. Ids present on
/// one side only are an error (all missing ids are listed).
Confusion confusion(const std::vector<std::pair<std::string, Label>>& predictions,
                    const std::vector<std::pair<std::string, Label>>& truth);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f_score = 0.0;
  double error_rate = 0.0;
  double fp_rate = 0.0;
  double tp_rate = 0.0;
  std::vector<std::string> zero_flagged;  // metrics reported 0 for a 0 denominator
};

Metrics metrics(const Confusion& c);

/// Mann-Whitney estimator: fraction of (positive, negative) pairs ranked
/// correctly, ties counted one half. Throws on single-class input.
double auc(const std::vector<double>& scores, const std::vector<Label>& labels);

struct SweepGrid {
  double lambda0_min = 0.0, lambda0_max = 10.0, lambda0_step = 0.25;
  int beta_min = 1, beta_max = 50, beta_step = 2;

  std::vector<double> lambda0_values() const;
  std::vector<int> beta_values() const;
};

struct SweepCell {
  double lambda0 = 0.0;
  int beta = 1;
  vtt::FeatureKind kind = vtt::FeatureKind::word;
  double mean_f_kfold = 0.0, mean_acc_kfold = 0.0;
  double mean_f_additional = 0.0, mean_acc_additional = 0.0;
  std::size_t r_f_k = 0, r_a_k = 0, r_f_t = 0, r_a_t = 0;  // competition ranks, 1 = best
  std::uint64_t rank_product = 0;                          // r_f_k * r_a_k * r_f_t * r_a_t
};

struct SweepResult {
  SweepCell best;
  std::vector<SweepCell> table;  // kind-major, then lambda0, then beta
};

struct SweepOptions {
  std::size_t k_words = 650;
  std::size_t n_partitions = 8;
  double test_fraction = 0.25;
  vtt::CountMode count_mode = vtt::CountMode::presence;
};

/// The hyperparameter selection protocol: per (lambda0, beta, kind) evaluate
/// mean F and accuracy over n k-fold partitions of `corpus` and over n
/// balanced test sets drawn from `additional` (training on all of `corpus`),
/// rank each measure over all cells, and return the cell with the smallest
/// rank product. Ties prefer higher mean F, then smaller (lambda0, beta).
SweepResult sweep(const Corpus& corpus, const Corpus& additional, const SweepGrid& grid,
                  const std::vector<vtt::FeatureKind>& kinds, std::uint64_t seed,
                  const StopwordPolicy& policy, const MentionRecognizer& recognizer,
                  const SweepOptions& options = {});

void save_sweep_tsv(const SweepResult& result, const std::string& path);

}  // namespace ppimine::eval
