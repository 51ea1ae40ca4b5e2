#include "ppimine/lsi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "ppimine/eval.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppimine::lsi {

using nlohmann::json;

DocMatrix build_matrix(const PreparedCorpus& corpus, const WordFeatureSet& words,
                       const std::vector<int>& np_counts) {
  if (np_counts.size() != corpus.size())
    throw std::invalid_argument("build_matrix: np_counts must align with the corpus");

  std::size_t n_docs = corpus.size();
  DocMatrix out;

  // document frequencies over the training corpus
  std::map<std::string, std::size_t> df;
  for (const auto& pd : corpus.docs) {
    std::set<std::string> present;
    for (const auto& s : pd.stems)
      if (words.contains(s)) present.insert(s);
    for (const auto& s : present) ++df[s];
  }
  for (const auto& w : words.ranked()) {
    auto it = df.find(w.stem);
    if (it == df.end() || it->second == 0) {
      out.dropped_features.push_back(w.stem);
      continue;
    }
    out.features.push_back(w.stem);
    out.idf.push_back(std::log(static_cast<double>(n_docs) / static_cast<double>(it->second)));
  }

  std::size_t dims = out.features.size() + 1;  // + np coordinate
  out.m = la::Matrix(n_docs, dims);
  out.unprojectable.assign(n_docs, false);

  std::map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < out.features.size(); ++j) col[out.features[j]] = j;

  for (std::size_t i = 0; i < n_docs; ++i) {
    const auto& pd = corpus.docs[i];
    out.doc_ids.push_back(pd.doc->id);
    out.labels.push_back(pd.doc->label);
    auto row = out.m.row(i);
    for (const auto& s : pd.stems) {
      auto it = col.find(s);
      if (it != col.end()) row[it->second] += 1.0;  // raw term frequency
    }
    for (std::size_t j = 0; j < out.features.size(); ++j) row[j] *= out.idf[j];
    row[dims - 1] = static_cast<double>(np_counts[i]);
    double n = la::norm(row);
    if (n == 0.0) {
      out.unprojectable[i] = true;
      continue;
    }
    for (auto& x : row) x /= n;
  }
  return out;
}

std::vector<double> vectorize(const PreparedDoc& doc, int np,
                              const std::vector<std::string>& features,
                              const std::vector<double>& idf) {
  std::vector<double> v(features.size() + 1, 0.0);
  std::map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < features.size(); ++j) col[features[j]] = j;
  for (const auto& s : doc.stems) {
    auto it = col.find(s);
    if (it != col.end()) v[it->second] += 1.0;
  }
  for (std::size_t j = 0; j < features.size(); ++j) v[j] *= idf[j];
  v.back() = static_cast<double>(np);
  double n = la::norm(v);
  if (n > 0.0)
    for (auto& x : v) x /= n;
  return v;
}

LsiSpace fit_svd(const DocMatrix& matrix, std::size_t k) {
  if (matrix.m.rows() == 0) throw std::invalid_argument("fit_svd: empty matrix");
  if (k == 0) throw std::invalid_argument("fit_svd: k must be >= 1");

  la::Svd svd = la::thin_svd(matrix.m);
  std::size_t rank = la::numeric_rank(svd, matrix.m.rows(), matrix.m.cols());
  LsiSpace space;
  if (k > rank) {
    space.k_clamped = true;
    k = rank;
  }
  space.k = k;
  space.features = matrix.features;
  space.idf = matrix.idf;
  space.doc_ids = matrix.doc_ids;
  space.labels = matrix.labels;
  space.singular_values.assign(svd.sigma.begin(), svd.sigma.begin() + static_cast<long>(k));
  space.basis = la::Matrix(matrix.m.cols(), k);
  for (std::size_t i = 0; i < matrix.m.cols(); ++i)
    for (std::size_t j = 0; j < k; ++j) space.basis(i, j) = svd.v(i, j);
  space.train_proj = la::Matrix(matrix.m.rows(), k);
  for (std::size_t i = 0; i < matrix.m.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) space.train_proj(i, j) = svd.u(i, j);
  return space;
}

std::vector<double> project(std::span<const double> raw, const LsiSpace& space) {
  if (raw.size() != space.basis.rows())
    throw std::invalid_argument("project: vector dimension mismatch");
  std::vector<double> p(space.k, 0.0);
  for (std::size_t j = 0; j < space.k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) s += space.basis(i, j) * raw[i];
    p[j] = s / space.singular_values[j];
  }
  return p;
}

PiNu pi_nu(std::span<const double> raw, const LsiSpace& space) {
  PiNu out;
  // sigma-scaled latent coordinates: basis^T * raw
  std::vector<double> latent(space.k, 0.0);
  for (std::size_t j = 0; j < space.k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) s += space.basis(i, j) * raw[i];
    latent[j] = s;
  }
  double test_norm = la::norm(latent);
  if (test_norm == 0.0) {
    out.unprojectable = true;
    return out;
  }

  std::size_t n_pos = 0, n_neg = 0;
  double sum_pos = 0.0, sum_neg = 0.0;
  std::vector<double> train_latent(space.k);
  for (std::size_t t = 0; t < space.train_proj.rows(); ++t) {
    Label label = space.labels[t];
    if (label == Label::positive)
      ++n_pos;
    else if (label == Label::negative)
      ++n_neg;
    else
      continue;
    for (std::size_t j = 0; j < space.k; ++j)
      train_latent[j] = space.train_proj(t, j) * space.singular_values[j];
    double tn = la::norm(train_latent);
    double c;
    if (tn == 0.0) {
      c = 0.0;
      ++out.zero_cosine_terms;
    } else {
      c = la::dot(latent, train_latent) / (test_norm * tn);
    }
    (label == Label::positive ? sum_pos : sum_neg) += c;
  }
  if (n_pos > 0) out.pi = sum_pos / static_cast<double>(n_pos);
  if (n_neg > 0) out.nu = sum_neg / static_cast<double>(n_neg);
  return out;
}

std::vector<PiNu> pi_nu_batch_serial(const la::Matrix& raws, const LsiSpace& space) {
  std::vector<PiNu> out(raws.rows());
  for (std::size_t i = 0; i < raws.rows(); ++i) out[i] = pi_nu(raws.row(i), space);
  return out;
}

std::vector<PiNu> pi_nu_batch(const la::Matrix& raws, const LsiSpace& space) {
  std::vector<PiNu> out(raws.rows());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < static_cast<long>(raws.rows()); ++i)
    out[static_cast<std::size_t>(i)] = pi_nu(raws.row(static_cast<std::size_t>(i)), space);
  return out;
}

bool classify_boundary(double pi, double nu, const LsiBoundary& boundary) {
  return pi > boundary.m * nu + boundary.b;
}

LsiBoundary fit_boundary(const std::vector<ScoreSet>& sets, const BoundaryGrid& grid) {
  if (sets.empty()) throw std::invalid_argument("fit_boundary: no evaluation sets");

  auto mean_scores = [&](const LsiBoundary& cand) {
    double f_sum = 0.0, acc_sum = 0.0;
    for (const auto& set : sets) {
      eval::Confusion c;
      for (std::size_t i = 0; i < set.scores.size(); ++i) {
        bool pos = classify_boundary(set.scores[i].pi, set.scores[i].nu, cand);
        bool truth = set.labels[i] == Label::positive;
        if (pos && truth) ++c.tp;
        else if (pos && !truth) ++c.fp;
        else if (!pos && truth) ++c.fn;
        else ++c.tn;
      }
      eval::Metrics m = eval::metrics(c);
      f_sum += m.f_score;
      acc_sum += m.accuracy;
    }
    double n = static_cast<double>(sets.size());
    return std::pair<double, double>{f_sum / n, acc_sum / n};
  };

  std::size_t m_steps =
      static_cast<std::size_t>((grid.m_max - grid.m_min) / grid.m_step + 1e-9) + 1;
  std::size_t b_steps =
      static_cast<std::size_t>((grid.b_max - grid.b_min) / grid.b_step + 1e-9) + 1;

  LsiBoundary best;
  double best_f = -1.0, best_acc = -1.0;
  for (std::size_t mi = 0; mi < m_steps; ++mi) {
    for (std::size_t bi = 0; bi < b_steps; ++bi) {
      LsiBoundary cand{grid.m_min + static_cast<double>(mi) * grid.m_step,
                       grid.b_min + static_cast<double>(bi) * grid.b_step};
      auto [f, acc] = mean_scores(cand);
      bool better = false;
      if (f > best_f) better = true;
      else if (f == best_f && acc > best_acc) better = true;
      else if (f == best_f && acc == best_acc &&
               std::abs(cand.m) < std::abs(best.m)) better = true;
      else if (f == best_f && acc == best_acc && std::abs(cand.m) == std::abs(best.m) &&
               cand.b < best.b) better = true;
      if (better) {
        best = cand;
        best_f = f;
        best_acc = acc;
      }
    }
  }
  return best;
}

namespace {

json matrix_to_json(const la::Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

la::Matrix matrix_from_json(const json& rows) {
  if (rows.empty()) return {};
  la::Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

}  // namespace

void save_space(const LsiSpace& space, const std::string& path) {
  json j;
  j["format"] = "ppimine-lsi/1";
  j["k"] = space.k;
  j["singular_values"] = space.singular_values;
  j["basis"] = matrix_to_json(space.basis);
  j["train_proj"] = matrix_to_json(space.train_proj);
  j["features"] = space.features;
  j["idf"] = space.idf;
  j["doc_ids"] = space.doc_ids;
  json labels = json::array();
  for (Label l : space.labels) labels.push_back(to_string(l));
  j["labels"] = std::move(labels);
  j["boundary"] = {{"m", space.boundary.m}, {"b", space.boundary.b}};
  j["k_clamped"] = space.k_clamped;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write space file: " + path);
  out << j.dump() << '\n';
}

LsiSpace load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open space file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || j.value("format", "") != "ppimine-lsi/1")
    throw std::runtime_error("not an lsi space file: " + path);
  LsiSpace s;
  s.k = j.at("k").get<std::size_t>();
  s.singular_values = j.at("singular_values").get<std::vector<double>>();
  s.basis = matrix_from_json(j.at("basis"));
  s.train_proj = matrix_from_json(j.at("train_proj"));
  s.features = j.at("features").get<std::vector<std::string>>();
  s.idf = j.at("idf").get<std::vector<double>>();
  s.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
  for (const auto& l : j.at("labels")) {
    std::string str = l.get<std::string>();
    s.labels.push_back(str == "positive" ? Label::positive
                                         : str == "negative" ? Label::negative
                                                             : Label::unlabeled);
  }
  s.boundary.m = j.at("boundary").at("m").get<double>();
  s.boundary.b = j.at("boundary").at("b").get<double>();
  s.k_clamped = j.value("k_clamped", false);
  return s;
}

}  // namespace ppimine::lsi
