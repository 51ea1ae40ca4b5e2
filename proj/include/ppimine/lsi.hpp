#pragma once

#include <string>
#include <vector>

#include "ppimine/corpus.hpp"
#include "ppimine/features.hpp"
#include "ppimine/la.hpp"

namespace ppimine::lsi {

/// TF-IDF document matrix over the selected word vocabulary with the mention
/// count appended as one extra coordinate before unit normalization.
struct DocMatrix {
  la::Matrix m;  // docs x (features + 1), rows unit length (zero rows flagged)
  std::vector<std::string> features;  // column order
  std::vector<double> idf;            // ln(N / df) per feature column
  std::vector<std::string> doc_ids;
  std::vector<Label> labels;
  std::vector<bool> unprojectable;          // all-zero rows
  std::vector<std::string> dropped_features;  // df == 0, excluded with warning
};

DocMatrix build_matrix(const PreparedCorpus& corpus, const WordFeatureSet& words,
                       const std::vector<int>& np_counts);

/// Vectorize one new document against a fitted matrix's vocabulary and idf.
std::vector<double> vectorize(const PreparedDoc& doc, int np,
                              const std::vector<std::string>& features,
                              const std::vector<double>& idf);

struct LsiBoundary {
  double m = 1.0;
  double b = 0.0;
};

struct LsiSpace {
  std::size_t k = 0;
  std::vector<double> singular_values;  // k, non-increasing, all > 0
  la::Matrix basis;                     // (features+1) x k right-singular vectors
  la::Matrix train_proj;                // docs x k, inverse-sigma scaled (rows of U)
  std::vector<std::string> features;
  std::vector<double> idf;
  std::vector<std::string> doc_ids;
  std::vector<Label> labels;
  bool k_clamped = false;  // requested k exceeded the numeric rank
  LsiBoundary boundary;
};

/// Rank-k truncated SVD of the document matrix. k above the numeric rank is
/// clamped (flagged). The parallel Jacobi kernel is used when available.
LsiSpace fit_svd(const DocMatrix& matrix, std::size_t k);

/// Folding-in: inverse-singular-value scaled projection onto the k basis
/// directions. Training rows reproduce their stored projections.
std::vector<double> project(std::span<const double> raw, const LsiSpace& space);

struct PiNu {
  double pi = 0.0;
  double nu = 0.0;
  int zero_cosine_terms = 0;  // training docs that contributed a flagged 0
  bool unprojectable = false; // the test vector itself had zero norm
};

/// Mean cosine of the test vector to all positive / negative training
/// documents. Cosines are evaluated on sigma-scaled latent coordinates, so at
/// full rank they equal cosines between the raw normalized vectors.
PiNu pi_nu(std::span<const double> raw, const LsiSpace& space);

std::vector<PiNu> pi_nu_batch(const la::Matrix& raws, const LsiSpace& space);
std::vector<PiNu> pi_nu_batch_serial(const la::Matrix& raws, const LsiSpace& space);

/// Positive iff pi > m * nu + b, strict.
bool classify_boundary(double pi, double nu, const LsiBoundary& boundary);

struct ScoreSet {
  std::vector<PiNu> scores;
  std::vector<Label> labels;
};

struct BoundaryGrid {
  double m_min = 0.0, m_max = 3.0, m_step = 0.05;
  double b_min = -1.0, b_max = 1.0, b_step = 0.01;
};

/// Grid search maximizing mean F-score across the given evaluation sets; ties
/// favor higher mean accuracy, then smaller |m|, then smaller b.
LsiBoundary fit_boundary(const std::vector<ScoreSet>& sets, const BoundaryGrid& grid = {});

void save_space(const LsiSpace& space, const std::string& path);
LsiSpace load_space(const std::string& path);

}  // namespace ppimine::lsi
