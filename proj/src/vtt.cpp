#include "ppimine/vtt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppimine::vtt {

using nlohmann::json;

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::word: return "word";
    case FeatureKind::bigram_plus: return "bigram_plus";
    default: return "cooccur";
  }
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "word") return FeatureKind::word;
  if (s == "bigram_plus" || s == "bigram") return FeatureKind::bigram_plus;
  if (s == "cooccur") return FeatureKind::cooccur;
  throw std::invalid_argument("unknown feature kind: " + s);
}

std::string to_string(Band band) {
  switch (band) {
    case Band::low: return "low";
    case Band::medium: return "medium";
    default: return "high";
  }
}

TermWeight term_weight(double p_tp, double p_tn) {
  if (p_tp == 0.0 && p_tn == 0.0)
    throw std::invalid_argument("term_weight: feature carries no signal (both probabilities 0)");
  double h = std::hypot(p_tp, p_tn);
  return {p_tp / h, p_tn / h};
}

VttModel train(const PreparedCorpus& corpus, FeatureKind kind, std::size_t k_words,
               double lambda0, int beta, CountMode mode) {
  if (beta < 1) throw std::invalid_argument("beta must be >= 1");
  if (lambda0 < 0.0) throw std::invalid_argument("lambda0 must be >= 0");

  auto stats = features::word_class_probs(corpus);
  WordFeatureSet words = features::select_top_words(stats, k_words);

  VttModel model;
  model.kind = kind;
  model.lambda0 = lambda0;
  model.beta = beta;
  model.count_mode = mode;
  for (const auto& w : words.ranked()) model.filter_words.push_back(w.stem);
  model.word_stats = words.ranked();

  if (kind == FeatureKind::word) {
    for (const auto& w : words.ranked())
      model.word_weights.emplace(w.stem, term_weight(w.p_tp, w.p_tn));
  } else {
    auto pair_stats = kind == FeatureKind::bigram_plus ? features::bigrams_plus(corpus, words)
                                                       : features::cooccur_pairs(corpus, words);
    for (const auto& [pair, st] : pair_stats) {
      model.pair_weights.emplace(pair, term_weight(st.p_tp, st.p_tn));
      model.pair_stats.push_back(st);
    }
  }

  model.model_version = [] (const VttModel& m) {
    // FNV-1a over the canonical weight listing: a stable content tag.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const std::string& s) {
      for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
      }
    };
    mix(to_string(m.kind));
    for (const auto& [k, w] : m.word_weights) {
      mix(k);
      mix(std::to_string(w.cos) + "/" + std::to_string(w.sin));
    }
    for (const auto& [k, w] : m.pair_weights) {
      mix(k.a + "," + k.b);
      mix(std::to_string(w.cos) + "/" + std::to_string(w.sin));
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "vtt-1-%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
  }(model);
  return model;
}

namespace {

WordFeatureSet filter_set(const VttModel& model) {
  std::vector<WordStat> stats;
  stats.reserve(model.filter_words.size());
  for (const auto& w : model.filter_words) stats.push_back(WordStat{w, 0, 0, 0});
  return WordFeatureSet(std::move(stats), false);
}

}  // namespace

SumScores score(const PreparedDoc& doc, const VttModel& model) {
  SumScores s;
  if (model.kind == FeatureKind::word) {
    if (model.count_mode == CountMode::presence) {
      std::set<std::string> present(doc.stems.begin(), doc.stems.end());
      for (const auto& stem : present) {
        auto it = model.word_weights.find(stem);
        if (it == model.word_weights.end()) continue;
        s.p_sum += it->second.cos;
        s.n_sum += it->second.sin;
      }
    } else {
      for (const auto& stem : doc.stems) {
        auto it = model.word_weights.find(stem);
        if (it == model.word_weights.end()) continue;
        s.p_sum += it->second.cos;
        s.n_sum += it->second.sin;
      }
    }
    return s;
  }

  WordFeatureSet words = filter_set(model);
  std::vector<std::string> filtered = features::filter_document(doc.stems, words);
  if (model.kind == FeatureKind::bigram_plus && model.count_mode == CountMode::occurrence) {
    for (std::size_t i = 0; i + 1 < filtered.size(); ++i) {
      auto it = model.pair_weights.find(StemPair{filtered[i], filtered[i + 1]});
      if (it == model.pair_weights.end()) continue;
      s.p_sum += it->second.cos;
      s.n_sum += it->second.sin;
    }
    return s;
  }
  auto pairs = model.kind == FeatureKind::bigram_plus ? features::doc_bigrams(filtered)
                                                      : features::doc_cooccur(filtered);
  for (const auto& p : pairs) {
    auto it = model.pair_weights.find(p);
    if (it == model.pair_weights.end()) continue;
    s.p_sum += it->second.cos;
    s.n_sum += it->second.sin;
  }
  return s;
}

Band band_of(double confidence, const BandCutoffs& cutoffs) {
  if (confidence <= cutoffs.low_max) return Band::low;
  if (confidence >= cutoffs.high_min) return Band::high;
  return Band::medium;
}

double threshold_value(double lambda0, int beta, int np) {
  return lambda0 + static_cast<double>(beta - np) / static_cast<double>(beta);
}

VttDecision decide(double p_sum, double n_sum, int np, double lambda0, int beta,
                   const BandCutoffs& cutoffs) {
  VttDecision d;
  d.p_sum = p_sum;
  d.n_sum = n_sum;
  d.np = np;
  d.threshold = threshold_value(lambda0, beta, np);
  double t = d.threshold;

  if (p_sum == 0.0 && n_sum == 0.0) {
    // No feature evidence: never a confident positive call.
    d.no_evidence = true;
    d.label = Label::negative;
    d.ratio = 0.0;
    d.margin = d.ratio - t;
    d.confidence = 0.0;
    d.band = Band::low;
    return d;
  }

  if (n_sum == 0.0) {
    d.label = Label::positive;
    if (t != 0.0) {
      d.ratio = t + kMaxConfidence * std::abs(t);
      d.margin = d.ratio - t;
      d.confidence = kMaxConfidence;
      d.band = band_of(d.confidence, cutoffs);
    } else {
      d.ratio = p_sum;  // documented fallback: evidence mass itself
      d.margin = d.ratio;
      d.confidence = 0.0;
      d.confidence_defined = false;
      d.band = Band::low;
    }
    return d;
  }

  d.ratio = p_sum / n_sum;
  d.label = d.ratio >= t ? Label::positive : Label::negative;
  d.margin = d.ratio - t;
  if (t == 0.0) {
    d.confidence = 0.0;
    d.confidence_defined = false;
    d.band = Band::low;
  } else {
    d.confidence = std::abs(d.margin) / std::abs(t);
    d.band = band_of(d.confidence, cutoffs);
  }
  return d;
}

VttDecision classify(const PreparedDoc& doc, const VttModel& model, int np,
                     const BandCutoffs& cutoffs) {
  SumScores s = score(doc, model);
  return decide(s.p_sum, s.n_sum, np, model.lambda0, model.beta, cutoffs);
}

std::vector<VttDecision> classify_corpus_serial(const PreparedCorpus& corpus,
                                                const VttModel& model,
                                                const MentionRecognizer& recognizer,
                                                const BandCutoffs& cutoffs) {
  std::vector<VttDecision> out(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    int np = features::count_mentions(*corpus.docs[i].doc, recognizer);
    out[i] = classify(corpus.docs[i], model, np, cutoffs);
  }
  return out;
}

std::vector<VttDecision> classify_corpus(const PreparedCorpus& corpus, const VttModel& model,
                                         const MentionRecognizer& recognizer,
                                         const BandCutoffs& cutoffs) {
  std::vector<VttDecision> out(corpus.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < static_cast<long>(corpus.size()); ++i) {
    auto idx = static_cast<std::size_t>(i);
    int np = features::count_mentions(*corpus.docs[idx].doc, recognizer);
    out[idx] = classify(corpus.docs[idx], model, np, cutoffs);
  }
  return out;
}

Ranking rank(const std::vector<VttDecision>& decisions, const std::vector<std::string>& ids) {
  if (decisions.size() != ids.size())
    throw std::invalid_argument("rank: decisions and ids must align");
  Ranking r;
  for (std::size_t i = 0; i < decisions.size(); ++i)
    (decisions[i].label == Label::positive ? r.positives : r.negatives).push_back(i);
  auto by_distance = [&](std::size_t a, std::size_t b) {
    double da = std::abs(decisions[a].margin);
    double db = std::abs(decisions[b].margin);
    if (da != db) return da > db;
    return ids[a] < ids[b];
  };
  std::sort(r.positives.begin(), r.positives.end(), by_distance);
  std::sort(r.negatives.begin(), r.negatives.end(), by_distance);
  return r;
}

void save_model(const VttModel& model, const std::string& path) {
  json j;
  j["format"] = "ppimine-vtt/1";
  j["feature_kind"] = to_string(model.kind);
  j["lambda0"] = model.lambda0;
  j["beta"] = model.beta;
  j["count_mode"] = model.count_mode == CountMode::presence ? "presence" : "occurrence";
  j["model_version"] = model.model_version;
  j["filter_words"] = model.filter_words;
  json weights = json::array();
  for (const auto& [stem, w] : model.word_weights)
    weights.push_back({{"feature", stem}, {"cos", w.cos}, {"sin", w.sin}});
  for (const auto& [pair, w] : model.pair_weights)
    weights.push_back({{"feature", pair.a + "," + pair.b}, {"cos", w.cos}, {"sin", w.sin}});
  j["weights"] = std::move(weights);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << j.dump(2) << '\n';
}

VttModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("format", "") != "ppimine-vtt/1")
    throw std::runtime_error("not a vtt model file: " + path);

  VttModel model;
  model.kind = feature_kind_from_string(j.at("feature_kind").get<std::string>());
  model.lambda0 = j.at("lambda0").get<double>();
  model.beta = j.at("beta").get<int>();
  model.count_mode =
      j.value("count_mode", "presence") == "occurrence" ? CountMode::occurrence
                                                        : CountMode::presence;
  model.model_version = j.value("model_version", "");
  model.filter_words = j.at("filter_words").get<std::vector<std::string>>();
  for (const auto& w : j.at("weights")) {
    std::string feature = w.at("feature").get<std::string>();
    TermWeight tw{w.at("cos").get<double>(), w.at("sin").get<double>()};
    auto comma = feature.find(',');
    if (model.kind == FeatureKind::word) {
      model.word_weights.emplace(feature, tw);
    } else {
      if (comma == std::string::npos)
        throw std::runtime_error("pair model with non-pair feature: " + feature);
      model.pair_weights.emplace(
          StemPair{feature.substr(0, comma), feature.substr(comma + 1)}, tw);
    }
  }
  return model;
}

}  // namespace ppimine::vtt
