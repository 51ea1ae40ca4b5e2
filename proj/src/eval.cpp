#include "ppimine/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "ppimine/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppimine::eval {

Confusion confusion(const std::vector<std::pair<std::string, Label>>& predictions,
                    const std::vector<std::pair<std::string, Label>>& truth) {
  std::map<std::string, Label> truth_by_id;
  for (const auto& [id, label] : truth) truth_by_id[id] = label;

  std::vector<std::string> missing;
  std::set<std::string> predicted_ids;
  Confusion c;
  for (const auto& [id, pred] : predictions) {
    predicted_ids.insert(id);
    auto it = truth_by_id.find(id);
    if (it == truth_by_id.end()) {
      missing.push_back(id);
      continue;
    }
    bool p = pred == Label::positive;
    bool t = it->second == Label::positive;
    if (p && t) ++c.tp;
    else if (p && !t) ++c.fp;
    else if (!p && t) ++c.fn;
    else ++c.tn;
  }
  for (const auto& [id, _] : truth)
    if (!predicted_ids.count(id)) missing.push_back(id);
  if (!missing.empty()) {
    std::string msg = "confusion: id mismatch, missing:";
    for (const auto& id : missing) msg += " " + id;
    throw std::runtime_error(msg);
  }
  return c;
}

namespace {

double safe_div(long num, long den, const char* name, std::vector<std::string>& flagged) {
  if (den == 0) {
    flagged.push_back(name);
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

Metrics metrics(const Confusion& c) {
  Metrics m;
  m.precision = safe_div(c.tp, c.tp + c.fp, "precision", m.zero_flagged);
  m.recall = safe_div(c.tp, c.tp + c.fn, "recall", m.zero_flagged);
  m.accuracy = safe_div(c.tp + c.tn, c.total(), "accuracy", m.zero_flagged);
  if (m.precision + m.recall > 0.0)
    m.f_score = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  else
    m.zero_flagged.push_back("f_score");
  m.error_rate = 1.0 - m.accuracy;
  m.fp_rate = safe_div(c.fp, c.fp + c.tn, "fp_rate", m.zero_flagged);
  m.tp_rate = m.recall;
  return m;
}

double auc(const std::vector<double>& scores, const std::vector<Label>& labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: size mismatch");
  std::size_t n_pos = 0, n_neg = 0;
  for (Label l : labels) {
    if (l == Label::positive) ++n_pos;
    if (l == Label::negative) ++n_neg;
  }
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("auc needs at least one document of each class");

  // Mann-Whitney U from average ranks; tied scores share their mean rank,
  // which counts each tied (pos, neg) pair as one half.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == Label::positive) rank_sum_pos += avg_rank;
    i = j;
  }
  double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::vector<double> SweepGrid::lambda0_values() const {
  std::vector<double> v;
  std::size_t n = static_cast<std::size_t>((lambda0_max - lambda0_min) / lambda0_step + 1e-9) + 1;
  for (std::size_t i = 0; i < n; ++i) v.push_back(lambda0_min + static_cast<double>(i) * lambda0_step);
  return v;
}

std::vector<int> SweepGrid::beta_values() const {
  std::vector<int> v;
  for (int b = beta_min; b <= beta_max; b += beta_step) v.push_back(b);
  return v;
}

namespace {

// Cached per-document sums for one trained model on one test set: every
// (lambda0, beta) cell then re-thresholds them without retraining.
struct CachedTestSet {
  std::vector<vtt::SumScores> sums;
  std::vector<int> np;
  std::vector<Label> labels;
};

std::pair<double, double> f_acc_for(const CachedTestSet& set, double lambda0, int beta) {
  Confusion c;
  for (std::size_t i = 0; i < set.sums.size(); ++i) {
    vtt::VttDecision d =
        vtt::decide(set.sums[i].p_sum, set.sums[i].n_sum, set.np[i], lambda0, beta);
    bool p = d.label == Label::positive;
    bool t = set.labels[i] == Label::positive;
    if (p && t) ++c.tp;
    else if (p && !t) ++c.fp;
    else if (!p && t) ++c.fn;
    else ++c.tn;
  }
  Metrics m = metrics(c);
  return {m.f_score, m.accuracy};
}

Corpus subset(const Corpus& corpus, const std::vector<std::string>& ids) {
  std::set<std::string> wanted(ids.begin(), ids.end());
  Corpus out;
  for (const auto& d : corpus.docs)
    if (wanted.count(d.id)) out.docs.push_back(d);
  return out;
}

// competition ranking: 1 = best (largest value); ties share the minimum rank
std::vector<std::size_t> competition_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<std::size_t> ranks(values.size(), 0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = i + 1;
    i = j;
  }
  return ranks;
}

}  // namespace

SweepResult sweep(const Corpus& corpus, const Corpus& additional, const SweepGrid& grid,
                  const std::vector<vtt::FeatureKind>& kinds, std::uint64_t seed,
                  const StopwordPolicy& policy, const MentionRecognizer& recognizer,
                  const SweepOptions& options) {
  std::vector<double> lambdas = grid.lambda0_values();
  std::vector<int> betas = grid.beta_values();
  if (lambdas.empty() || betas.empty() || kinds.empty())
    throw std::invalid_argument("sweep: empty grid");

  auto kfold = make_partitions(corpus, options.n_partitions, options.test_fraction, seed);
  auto extra = make_partitions(additional, options.n_partitions, options.test_fraction, seed + 1);

  // Per kind: n k-fold test caches (model trained on the partition's train
  // half) and n additional-data caches (model trained on the whole corpus).
  std::vector<std::vector<CachedTestSet>> kfold_cache(kinds.size()),
      extra_cache(kinds.size());

  PreparedCorpus whole = prepare_corpus(corpus, policy);
  PreparedCorpus extra_whole = prepare_corpus(additional, policy);
  std::map<std::string, const PreparedDoc*> by_id, extra_by_id;
  for (const auto& pd : whole.docs) by_id[pd.doc->id] = &pd;
  for (const auto& pd : extra_whole.docs) extra_by_id[pd.doc->id] = &pd;
  std::map<std::string, int> np_cache, extra_np_cache;
  for (const auto& pd : whole.docs)
    np_cache[pd.doc->id] = features::count_mentions(*pd.doc, recognizer);
  for (const auto& pd : extra_whole.docs)
    extra_np_cache[pd.doc->id] = features::count_mentions(*pd.doc, recognizer);

  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    kfold_cache[ki].resize(kfold.size());
    extra_cache[ki].resize(extra.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long p = 0; p < static_cast<long>(kfold.size()); ++p) {
      auto pi = static_cast<std::size_t>(p);
      Corpus train = subset(corpus, kfold[pi].train);
      PreparedCorpus prepared = prepare_corpus(train, policy);
      vtt::VttModel model = vtt::train(prepared, kinds[ki], options.k_words, 1.0, 1,
                                       options.count_mode);
      CachedTestSet& cache = kfold_cache[ki][pi];
      for (const auto& id : kfold[pi].test) {
        const PreparedDoc* pd = by_id.at(id);
        cache.sums.push_back(vtt::score(*pd, model));
        cache.np.push_back(np_cache.at(id));
        cache.labels.push_back(pd->doc->label);
      }
    }

    // additional-data protocol: one model per kind, trained on everything
    vtt::VttModel full_model =
        vtt::train(whole, kinds[ki], options.k_words, 1.0, 1, options.count_mode);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long p = 0; p < static_cast<long>(extra.size()); ++p) {
      auto pi = static_cast<std::size_t>(p);
      CachedTestSet& cache = extra_cache[ki][pi];
      for (const auto& id : extra[pi].test) {
        const PreparedDoc* pd = extra_by_id.at(id);
        cache.sums.push_back(vtt::score(*pd, full_model));
        cache.np.push_back(extra_np_cache.at(id));
        cache.labels.push_back(pd->doc->label);
      }
    }
  }

  SweepResult result;
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    for (double lambda0 : lambdas) {
      for (int beta : betas) {
        SweepCell cell;
        cell.lambda0 = lambda0;
        cell.beta = beta;
        cell.kind = kinds[ki];
        double f_k = 0, a_k = 0, f_t = 0, a_t = 0;
        for (const auto& cache : kfold_cache[ki]) {
          auto [f, a] = f_acc_for(cache, lambda0, beta);
          f_k += f;
          a_k += a;
        }
        for (const auto& cache : extra_cache[ki]) {
          auto [f, a] = f_acc_for(cache, lambda0, beta);
          f_t += f;
          a_t += a;
        }
        cell.mean_f_kfold = f_k / static_cast<double>(kfold.size());
        cell.mean_acc_kfold = a_k / static_cast<double>(kfold.size());
        cell.mean_f_additional = f_t / static_cast<double>(extra.size());
        cell.mean_acc_additional = a_t / static_cast<double>(extra.size());
        result.table.push_back(cell);
      }
    }
  }

  std::vector<double> f_k, a_k, f_t, a_t;
  for (const auto& c : result.table) {
    f_k.push_back(c.mean_f_kfold);
    a_k.push_back(c.mean_acc_kfold);
    f_t.push_back(c.mean_f_additional);
    a_t.push_back(c.mean_acc_additional);
  }
  auto r1 = competition_ranks(f_k), r2 = competition_ranks(a_k), r3 = competition_ranks(f_t),
       r4 = competition_ranks(a_t);
  for (std::size_t i = 0; i < result.table.size(); ++i) {
    auto& c = result.table[i];
    c.r_f_k = r1[i];
    c.r_a_k = r2[i];
    c.r_f_t = r3[i];
    c.r_a_t = r4[i];
    c.rank_product = static_cast<std::uint64_t>(c.r_f_k) * c.r_a_k * c.r_f_t * c.r_a_t;
  }

  const SweepCell* best = &result.table.front();
  auto mean_f = [](const SweepCell& c) { return (c.mean_f_kfold + c.mean_f_additional) / 2.0; };
  for (const auto& c : result.table) {
    if (c.rank_product < best->rank_product) best = &c;
    else if (c.rank_product == best->rank_product) {
      if (mean_f(c) > mean_f(*best)) best = &c;
      else if (mean_f(c) == mean_f(*best) &&
               std::tie(c.lambda0, c.beta) < std::tie(best->lambda0, best->beta))
        best = &c;
    }
  }
  result.best = *best;
  return result;
}

void save_sweep_tsv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write sweep file: " + path);
  out << "lambda0\tbeta\tfeature_kind\tmean_f_kfold\tmean_acc_kfold\tmean_f_additional\t"
         "mean_acc_additional\tr_f_k\tr_a_k\tr_f_t\tr_a_t\trank_product\n";
  for (const auto& c : result.table) {
    out << io::fmt(c.lambda0) << '\t' << c.beta << '\t' << vtt::to_string(c.kind) << '\t'
        << io::fmt(c.mean_f_kfold) << '\t' << io::fmt(c.mean_acc_kfold) << '\t'
        << io::fmt(c.mean_f_additional) << '\t' << io::fmt(c.mean_acc_additional) << '\t'
        << c.r_f_k << '\t' << c.r_a_k << '\t' << c.r_f_t << '\t' << c.r_a_t << '\t'
        << c.rank_product << '\n';
  }
}

}  // namespace ppimine::eval
