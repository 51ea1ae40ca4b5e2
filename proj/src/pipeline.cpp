#include "ppimine/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "ppimine/fulltext.hpp"
#include "ppimine/io.hpp"

namespace ppimine::pipeline {

using nlohmann::json;

vtt::VttModel train_vtt(const Corpus& corpus, const StopwordPolicy& policy,
                        const VttTrainOptions& options) {
  PreparedCorpus prepared = prepare_corpus(corpus, policy);
  return vtt::train(prepared, options.kind, options.k_words, options.lambda0, options.beta,
                    options.count_mode);
}

std::vector<ClassifyRow> classify_vtt(const Corpus& corpus, const vtt::VttModel& model,
                                      const StopwordPolicy& policy,
                                      const MentionRecognizer& recognizer,
                                      const vtt::BandCutoffs& cutoffs) {
  PreparedCorpus prepared = prepare_corpus(corpus, policy);
  std::vector<vtt::VttDecision> decisions =
      vtt::classify_corpus(prepared, model, recognizer, cutoffs);
  std::vector<ClassifyRow> rows;
  rows.reserve(decisions.size());
  for (std::size_t i = 0; i < decisions.size(); ++i)
    rows.push_back({corpus.docs[i].id, decisions[i]});
  return rows;
}

void write_classify_tsv(const std::vector<ClassifyRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write labels file: " + path);
  out << "id\tlabel\tp_sum\tn_sum\tnp\tthreshold\tmargin\tconfidence\tband\n";
  for (const auto& row : rows) {
    const auto& d = row.decision;
    out << row.id << '\t' << to_string(d.label) << '\t' << io::fmt(d.p_sum) << '\t'
        << io::fmt(d.n_sum) << '\t' << d.np << '\t' << io::fmt(d.threshold) << '\t'
        << io::fmt(d.margin) << '\t' << io::fmt(d.confidence) << '\t' << vtt::to_string(d.band)
        << '\n';
  }
}

ClassifyResponse classify_text(const std::string& text, const vtt::VttModel& model,
                               const StopwordPolicy& policy,
                               const MentionRecognizer& recognizer,
                               const vtt::BandCutoffs& cutoffs) {
  Document doc;
  doc.id = "request";
  doc.text = text;
  doc.paragraphs.push_back(text);
  PreparedDoc prepared = prepare_document(doc, policy);
  int np = features::count_mentions(doc, recognizer);
  vtt::VttDecision d = vtt::classify(prepared, model, np, cutoffs);
  ClassifyResponse r;
  r.label = d.label;
  r.confidence = d.confidence;
  r.band = d.band;
  r.np = d.np;
  r.p_sum = d.p_sum;
  r.n_sum = d.n_sum;
  r.threshold = d.threshold;
  r.model_version = model.model_version;
  return r;
}

lsi::LsiSpace train_lsi(const Corpus& corpus, const StopwordPolicy& policy,
                        const MentionRecognizer& recognizer, const LsiTrainOptions& options) {
  PreparedCorpus prepared = prepare_corpus(corpus, policy);
  auto stats = features::word_class_probs(prepared);
  WordFeatureSet words = features::select_top_words(stats, options.k_words);

  std::vector<int> np(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    np[i] = features::count_mentions(corpus.docs[i], recognizer);

  lsi::DocMatrix matrix = lsi::build_matrix(prepared, words, np);
  lsi::LsiSpace space = lsi::fit_svd(matrix, options.k_components);

  std::vector<lsi::ScoreSet> sets;
  if (options.boundary_partitions == 0) {
    lsi::ScoreSet set;
    set.scores = lsi::pi_nu_batch(matrix.m, space);
    set.labels = matrix.labels;
    sets.push_back(std::move(set));
  } else {
    auto parts = make_partitions(corpus, options.boundary_partitions, options.test_fraction,
                                 options.seed);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < corpus.size(); ++i) index[corpus.docs[i].id] = i;
    for (const auto& part : parts) {
      // fit a fold space on the training half, score the held-out half
      Corpus fold_train;
      for (const auto& id : part.train) fold_train.docs.push_back(corpus.docs[index.at(id)]);
      PreparedCorpus fold_prepared = prepare_corpus(fold_train, policy);
      std::vector<int> fold_np;
      for (const auto& id : part.train) fold_np.push_back(np[index.at(id)]);
      lsi::DocMatrix fold_matrix = lsi::build_matrix(fold_prepared, words, fold_np);
      lsi::LsiSpace fold_space = lsi::fit_svd(
          fold_matrix, std::min(options.k_components, fold_matrix.m.rows()));

      lsi::ScoreSet set;
      for (const auto& id : part.test) {
        std::size_t i = index.at(id);
        std::vector<double> vec = lsi::vectorize(prepared.docs[i], np[i], fold_space.features,
                                                 fold_space.idf);
        set.scores.push_back(lsi::pi_nu(vec, fold_space));
        set.labels.push_back(corpus.docs[i].label);
      }
      sets.push_back(std::move(set));
    }
  }
  space.boundary = lsi::fit_boundary(sets, options.boundary_grid);
  return space;
}

std::vector<LsiRow> classify_lsi(const Corpus& corpus, const lsi::LsiSpace& space,
                                 const StopwordPolicy& policy,
                                 const MentionRecognizer& recognizer) {
  PreparedCorpus prepared = prepare_corpus(corpus, policy);
  la::Matrix raws(corpus.size(), space.basis.rows());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    int np = features::count_mentions(corpus.docs[i], recognizer);
    std::vector<double> v = lsi::vectorize(prepared.docs[i], np, space.features, space.idf);
    for (std::size_t j = 0; j < v.size(); ++j) raws(i, j) = v[j];
  }
  std::vector<lsi::PiNu> scores = lsi::pi_nu_batch(raws, space);
  std::vector<LsiRow> rows(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    rows[i].id = corpus.docs[i].id;
    rows[i].scores = scores[i];
    bool pos = lsi::classify_boundary(scores[i].pi, scores[i].nu, space.boundary);
    rows[i].label = pos ? Label::positive : Label::negative;
    rows[i].margin =
        scores[i].pi - (space.boundary.m * scores[i].nu + space.boundary.b);
  }
  return rows;
}

FusedOutput classify_fused(const Corpus& test, const Corpus& train,
                           const std::vector<const vtt::VttModel*>& vtt_models,
                           const lsi::LsiSpace* space, const StopwordPolicy& policy,
                           const MentionRecognizer& recognizer, const FusedOptions& options) {
  if (vtt_models.empty() && !space)
    throw std::invalid_argument("classify_fused: no methods given");

  PreparedCorpus train_prepared = prepare_corpus(train, policy);
  PreparedCorpus test_prepared = prepare_corpus(test, policy);
  auto stats = features::word_class_probs(train_prepared);
  WordFeatureSet words = features::select_top_words(stats, options.k_words);
  fusion::CompoundSpace compound = fusion::build_compound_space(train_prepared, words);

  struct Method {
    std::string id;
    std::vector<Label> test_labels;
    std::vector<bool> train_correct;
  };
  std::vector<Method> methods;

  auto train_np = [&](std::size_t i) {
    return features::count_mentions(train.docs[i], recognizer);
  };

  for (std::size_t mi = 0; mi < vtt_models.size(); ++mi) {
    const vtt::VttModel& model = *vtt_models[mi];
    Method m;
    m.id = "vtt-" + vtt::to_string(model.kind) + "-" + std::to_string(mi);
    auto test_decisions = vtt::classify_corpus(test_prepared, model, recognizer, options.cutoffs);
    for (const auto& d : test_decisions) m.test_labels.push_back(d.label);
    m.train_correct.resize(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
      vtt::VttDecision d =
          vtt::classify(train_prepared.docs[i], model, train_np(i), options.cutoffs);
      m.train_correct[i] = d.label == train.docs[i].label;
    }
    methods.push_back(std::move(m));
  }

  if (space) {
    Method m;
    m.id = "lsi";
    auto rows = classify_lsi(test, *space, policy, recognizer);
    for (const auto& r : rows) m.test_labels.push_back(r.label);
    auto train_rows = classify_lsi(train, *space, policy, recognizer);
    m.train_correct.resize(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
      m.train_correct[i] = train_rows[i].label == train.docs[i].label;
    methods.push_back(std::move(m));
  }

  std::vector<std::string> priority = options.priority;
  if (priority.empty())
    for (const auto& m : methods) priority.push_back(m.id);

  FusedOutput out;
  for (std::size_t i = 0; i < test.size(); ++i) {
    std::vector<double> vec = fusion::compound_vector(test_prepared.docs[i], compound);
    fusion::FusionRow row;
    row.id = test.docs[i].id;
    for (const auto& m : methods) {
      const std::vector<bool>* mask =
          options.vote_mode == fusion::VoteMode::correctness_mask ? &m.train_correct : nullptr;
      fusion::VoteDistribution dist = fusion::vote_probs(vec, compound, mask);
      fusion::MethodPrediction pred;
      pred.method_id = m.id;
      pred.label = m.test_labels[i];
      pred.uncertainty = fusion::entropy_bits(dist);
      row.per_method.push_back(std::move(pred));
    }
    row.chosen = fusion::integrate(row.per_method, priority);
    out.report.push_back(row);

    ClassifyRow crow;
    crow.id = test.docs[i].id;
    crow.decision.label = row.chosen.label;
    // rank key: certain positives first, certain negatives last
    double certainty = 1.0 - row.chosen.uncertainty;
    crow.decision.margin =
        row.chosen.label == Label::positive ? 1.0 + certainty : -(1.0 + certainty);
    crow.decision.confidence = certainty;
    crow.decision.band = vtt::band_of(certainty, options.cutoffs);
    out.rows.push_back(std::move(crow));
  }
  return out;
}

Evaluation evaluate_rows(const std::vector<ClassifyRow>& rows, const Corpus& corpus) {
  std::vector<std::pair<std::string, Label>> predictions, truth;
  for (const auto& row : rows) predictions.emplace_back(row.id, row.decision.label);
  for (const auto& doc : corpus.docs) {
    if (doc.label == Label::unlabeled)
      throw std::runtime_error("evaluate needs a fully labeled corpus (unlabeled id " + doc.id +
                               ")");
    truth.emplace_back(doc.id, doc.label);
  }
  Evaluation ev;
  ev.confusion = eval::confusion(predictions, truth);
  ev.metrics = eval::metrics(ev.confusion);

  std::map<std::string, Label> truth_by_id(truth.begin(), truth.end());
  std::vector<double> scores;
  std::vector<Label> labels;
  for (const auto& row : rows) {
    scores.push_back(row.decision.margin);
    labels.push_back(truth_by_id.at(row.id));
  }
  bool both = ev.confusion.tp + ev.confusion.fn > 0 && ev.confusion.fp + ev.confusion.tn > 0;
  if (both) ev.auc = eval::auc(scores, labels);
  return ev;
}

void write_metrics_json(const Evaluation& evaluation, const std::string& path) {
  json j;
  j["confusion"] = {{"tp", evaluation.confusion.tp},
                    {"fp", evaluation.confusion.fp},
                    {"tn", evaluation.confusion.tn},
                    {"fn", evaluation.confusion.fn}};
  const auto& m = evaluation.metrics;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["accuracy"] = m.accuracy;
  j["f_score"] = m.f_score;
  j["error_rate"] = m.error_rate;
  j["fp_rate"] = m.fp_rate;
  j["tp_rate"] = m.tp_rate;
  if (!m.zero_flagged.empty()) j["zero_flagged"] = m.zero_flagged;
  if (evaluation.auc) j["auc"] = *evaluation.auc;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  out << j.dump(2) << '\n';
}

PassageOutputs rank_passages(const Corpus& fulltexts, const Corpus& train_abstracts,
                             const Corpus& evidence, const StopwordPolicy& policy,
                             const MentionRecognizer& recognizer,
                             const RankPassagesOptions& options) {
  PreparedCorpus train_prepared = prepare_corpus(train_abstracts, policy);
  auto stats = features::word_class_probs(train_prepared);
  WordFeatureSet words = features::select_top_words(stats, options.k_words);
  auto cooccur = features::cooccur_pairs(train_prepared, words);
  std::vector<fulltext::PairPpiScore> pair_scores =
      fulltext::pair_ppi_scores(cooccur, options.top_pairs);

  PreparedCorpus evidence_prepared = prepare_corpus(evidence, policy);
  PreparedCorpus full_prepared = prepare_corpus(fulltexts, policy);
  std::set<std::string> sentence_feats;
  for (const auto& sf :
       fulltext::sentence_features(evidence_prepared, full_prepared, options.top_sentence_features))
    sentence_feats.insert(sf.stem);

  PassageOutputs out;
  for (std::size_t di = 0; di < fulltexts.size(); ++di) {
    const Document& doc = fulltexts.docs[di];
    const PreparedDoc& prepared = full_prepared.docs[di];

    std::vector<int> mention_counts(doc.paragraphs.size());
    for (std::size_t k = 0; k < doc.paragraphs.size(); ++k)
      mention_counts[k] = static_cast<int>(
          features::distinct_mentions(doc, doc.paragraphs[k], recognizer).size());

    fulltext::CriterionRanks crit =
        fulltext::rank_paragraphs(prepared, pair_scores, mention_counts, sentence_feats);
    fulltext::CombinedRanks combined = fulltext::combine_ranks(crit);

    const std::vector<std::size_t>* ranks[3] = {&combined.rank1, &combined.rank2,
                                                &combined.rank3};
    for (int c = 0; c < 3; ++c) {
      for (const auto& pair : fulltext::extract_pairs(doc, *ranks[c], recognizer))
        out.ips.push_back({pair.doc_id, pair.m1, pair.m2, pair.rank, c + 1});
    }

    const std::vector<std::size_t>& iss_ranks = *ranks[options.iss_combination - 1];
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < iss_ranks.size(); ++k)
      if (iss_ranks[k] > 0) order.push_back(k);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return iss_ranks[a] < iss_ranks[b]; });
    for (std::size_t k : order) {
      std::size_t n_sent = fulltext::split_sentences(doc.paragraphs[k]).size();
      for (std::size_t si = 0; si < n_sent; ++si)
        out.iss.push_back({doc.id, k, si, iss_ranks[k]});
    }
  }
  return out;
}

void write_ips_tsv(const std::vector<PassageOutputs::IpsRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write pairs file: " + path);
  out << "doc_id\tmention_1\tmention_2\trank\tcombination\n";
  for (const auto& r : rows)
    out << r.doc_id << '\t' << r.m1 << '\t' << r.m2 << '\t' << r.rank << '\t' << r.combination
        << '\n';
}

void write_iss_tsv(const std::vector<PassageOutputs::IssRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write passages file: " + path);
  out << "doc_id\tparagraph_index\tsentence_index\trank\n";
  for (const auto& r : rows)
    out << r.doc_id << '\t' << r.paragraph_index << '\t' << r.sentence_index << '\t' << r.rank
        << '\n';
}

}  // namespace ppimine::pipeline
