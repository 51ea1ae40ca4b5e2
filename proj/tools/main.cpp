#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppimine/config.hpp"
#include "ppimine/io.hpp"
#include "ppimine/pipeline.hpp"
#include "ppimine/proxnet.hpp"
#include "ppimine/service.hpp"

using namespace ppimine;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string config_path;
  Config config;
  std::string lexicon_path;
  std::string mentions_path;

  std::unique_ptr<MentionRecognizer> make_recognizer() const {
    if (!lexicon_path.empty())
      return std::make_unique<LexiconRecognizer>(LexiconRecognizer::from_file(lexicon_path));
    if (!mentions_path.empty())
      return std::make_unique<PrecomputedRecognizer>(
          PrecomputedRecognizer::from_file(mentions_path));
    return std::make_unique<NullRecognizer>();
  }

  StopwordPolicy stopwords() const {
    std::string path = config.get("textprep.stopwords", "");
    if (!path.empty()) return StopwordPolicy::from_file(path);
    return StopwordPolicy::default_policy();
  }

  vtt::BandCutoffs cutoffs() const {
    vtt::BandCutoffs c;
    c.low_max = config.get_double("band.low_max", c.low_max);
    c.high_min = config.get_double("band.high_min", c.high_min);
    return c;
  }
};

void add_recognizer_flags(CLI::App* cmd, Common& common) {
  cmd->add_option("--lexicon", common.lexicon_path,
                  "protein name lexicon, one name per line");
  cmd->add_option("--mentions", common.mentions_path,
                  "precomputed mentions JSONL {\"id\", \"mentions\"}");
}

// JSON "format" tag decides what kind of model a file holds.
std::string model_format(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::runtime_error("not a model file: " + path);
  return j.value("format", "");
}

void write_lsi_tsv(const std::vector<pipeline::LsiRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write labels file: " + path);
  out << "id\tlabel\tpi\tnu\tmargin\n";
  for (const auto& r : rows)
    out << r.id << '\t' << to_string(r.label) << '\t' << io::fmt(r.scores.pi) << '\t'
        << io::fmt(r.scores.nu) << '\t' << io::fmt(r.margin) << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"ppimine: protein-interaction bibliome mining toolkit"};
  app.require_subcommand(1);

  Common common;
  app.add_option("--seed", common.seed, "seed for every randomized step")->capture_default_str();
  app.add_option("--config", common.config_path, "key = value configuration file");

  // train ---------------------------------------------------------------
  auto* train = app.add_subcommand("train", "train a classifier and write the model file");
  std::string train_corpus, train_out, train_method = "vtt", train_kind = "cooccur";
  std::string count_mode = "presence";
  std::string export_features, export_histogram;
  std::size_t k_words = 650, k_components = 100, boundary_partitions = 8;
  double lambda0 = 1.0, test_fraction = 0.25;
  int beta = 15;
  train->add_option("--corpus", train_corpus, "labeled corpus JSONL")->required();
  train->add_option("--out", train_out, "model file to write")->required();
  train->add_option("--method", train_method, "vtt | lsi")->capture_default_str();
  train->add_option("--kind", train_kind, "word | bigram_plus | cooccur")->capture_default_str();
  train->add_option("--k-words", k_words, "word features to select")->capture_default_str();
  train->add_option("--lambda0", lambda0, "decision threshold constant")->capture_default_str();
  train->add_option("--beta", beta, "mention-count constant")->capture_default_str();
  train->add_option("--count-mode", count_mode, "presence | occurrence")->capture_default_str();
  train->add_option("--k-components", k_components, "retained SVD components (lsi)")
      ->capture_default_str();
  train->add_option("--boundary-partitions", boundary_partitions,
                    "partitions for the boundary fit (lsi); 0 fits on self scores")
      ->capture_default_str();
  train->add_option("--test-fraction", test_fraction, "held-out fraction per partition")
      ->capture_default_str();
  train->add_option("--export-features", export_features, "write the feature TSV here");
  train->add_option("--export-s-histogram", export_histogram,
                    "write the ranked-score histogram TSV here");
  add_recognizer_flags(train, common);

  // classify ------------------------------------------------------------
  auto* classify = app.add_subcommand("classify", "label a corpus with a trained model");
  std::string classify_model, classify_corpus, classify_out, fusion_train, fusion_report;
  std::vector<std::string> fusion_models;
  classify->add_option("--model", classify_model, "model file (vtt or lsi)");
  classify->add_option("--models", fusion_models,
                       "two or more model files for uncertainty integration");
  classify->add_option("--train", fusion_train,
                       "training corpus JSONL (required with --models)");
  classify->add_option("--fusion-report", fusion_report, "per-document fusion JSONL");
  classify->add_option("--corpus", classify_corpus, "corpus JSONL to classify")->required();
  classify->add_option("--out", classify_out, "labels TSV to write")->required();
  add_recognizer_flags(classify, common);

  // evaluate ------------------------------------------------------------
  auto* evaluate = app.add_subcommand("evaluate", "metrics of a model on a labeled corpus");
  std::string eval_model, eval_corpus, eval_out;
  evaluate->add_option("--model", eval_model, "model file (vtt or lsi)")->required();
  evaluate->add_option("--corpus", eval_corpus, "labeled corpus JSONL")->required();
  evaluate->add_option("--out", eval_out, "metrics JSON to write")->required();
  add_recognizer_flags(evaluate, common);

  // sweep ---------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "rank-product hyperparameter selection");
  std::string sweep_corpus, sweep_additional, sweep_out, sweep_kinds = "word,bigram_plus,cooccur";
  eval::SweepGrid grid;
  eval::SweepOptions sweep_options;
  sweep_cmd->add_option("--corpus", sweep_corpus, "training corpus JSONL")->required();
  sweep_cmd->add_option("--additional", sweep_additional, "additional labeled corpus JSONL")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "sweep table TSV")->required();
  sweep_cmd->add_option("--kinds", sweep_kinds, "comma list of feature kinds")
      ->capture_default_str();
  sweep_cmd->add_option("--lambda0-min", grid.lambda0_min)->capture_default_str();
  sweep_cmd->add_option("--lambda0-max", grid.lambda0_max)->capture_default_str();
  sweep_cmd->add_option("--lambda0-step", grid.lambda0_step)->capture_default_str();
  sweep_cmd->add_option("--beta-min", grid.beta_min)->capture_default_str();
  sweep_cmd->add_option("--beta-max", grid.beta_max)->capture_default_str();
  sweep_cmd->add_option("--beta-step", grid.beta_step)->capture_default_str();
  sweep_cmd->add_option("--k-words", sweep_options.k_words)->capture_default_str();
  sweep_cmd->add_option("--n-partitions", sweep_options.n_partitions)->capture_default_str();
  sweep_cmd->add_option("--test-fraction", sweep_options.test_fraction)->capture_default_str();
  add_recognizer_flags(sweep_cmd, common);

  // rank-passages ---------------------------------------------------------
  auto* rank_cmd = app.add_subcommand("rank-passages", "full-text paragraph and pair ranking");
  std::string rank_corpus, rank_train, rank_evidence, ips_out, iss_out;
  pipeline::RankPassagesOptions rank_options;
  rank_cmd->add_option("--corpus", rank_corpus, "full-text corpus JSONL")->required();
  rank_cmd->add_option("--train", rank_train, "labeled abstract corpus JSONL")->required();
  rank_cmd->add_option("--evidence", rank_evidence, "interaction evidence corpus JSONL")
      ->required();
  rank_cmd->add_option("--ips", ips_out, "pair TSV to write")->required();
  rank_cmd->add_option("--iss", iss_out, "passage TSV to write")->required();
  rank_cmd->add_option("--k-words", rank_options.k_words)->capture_default_str();
  rank_cmd->add_option("--top-pairs", rank_options.top_pairs)->capture_default_str();
  rank_cmd->add_option("--top-sentence-features", rank_options.top_sentence_features)
      ->capture_default_str();
  rank_cmd->add_option("--iss-combination", rank_options.iss_combination, "1 | 2 | 3")
      ->capture_default_str();
  add_recognizer_flags(rank_cmd, common);

  // build-network -----------------------------------------------------------
  auto* net_cmd = app.add_subcommand("build-network", "per-document word proximity network");
  std::string net_corpus, net_doc, net_out, expansion_out;
  std::vector<std::string> seeds;
  double expand_threshold = 0.25;
  std::size_t expand_limit = 50;
  net_cmd->add_option("--corpus", net_corpus, "corpus JSONL")->required();
  net_cmd->add_option("--doc", net_doc, "document id")->required();
  net_cmd->add_option("--out", net_out, "edge list TSV")->required();
  net_cmd->add_option("--seeds", seeds, "seed nodes for feature expansion");
  net_cmd->add_option("--expansion-out", expansion_out, "expanded feature TSV");
  net_cmd->add_option("--threshold", expand_threshold, "expansion weight threshold")
      ->capture_default_str();
  net_cmd->add_option("--limit", expand_limit, "expansion size limit")->capture_default_str();
  add_recognizer_flags(net_cmd, common);

  // serve ---------------------------------------------------------------
  auto* serve_cmd = app.add_subcommand("serve", "JSON classification service");
  std::string serve_model, host = "127.0.0.1";
  int port = 8080;
  std::size_t max_text_bytes = 100 * 1024;
  serve_cmd->add_option("--model", serve_model, "vtt model file")->required();
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->capture_default_str();
  serve_cmd->add_option("--max-text-bytes", max_text_bytes)->capture_default_str();
  add_recognizer_flags(serve_cmd, common);

  CLI11_PARSE(app, argc, argv);

  if (!common.config_path.empty()) common.config = Config::from_file(common.config_path);

  StopwordPolicy policy = common.stopwords();
  auto recognizer = common.make_recognizer();

  if (*train) {
    Corpus corpus = load_corpus(train_corpus);
    if (!export_histogram.empty() || (!export_features.empty() && train_method == "lsi")) {
      PreparedCorpus prepared = prepare_corpus(corpus, policy);
      auto stats = features::word_class_probs(prepared);
      if (!export_histogram.empty()) features::save_score_histogram(stats, export_histogram);
      if (!export_features.empty() && train_method == "lsi")
        features::save_feature_tsv(features::select_top_words(stats, k_words), export_features);
    }
    if (train_method == "vtt") {
      pipeline::VttTrainOptions options;
      options.kind = vtt::feature_kind_from_string(train_kind);
      options.k_words = k_words;
      options.lambda0 = lambda0;
      options.beta = beta;
      options.count_mode =
          count_mode == "occurrence" ? vtt::CountMode::occurrence : vtt::CountMode::presence;
      vtt::VttModel model = pipeline::train_vtt(corpus, policy, options);
      vtt::save_model(model, train_out);
      if (!export_features.empty()) {
        if (options.kind == vtt::FeatureKind::word) {
          features::save_feature_tsv(WordFeatureSet(model.word_stats, false), export_features);
        } else {
          std::map<StemPair, PairStat> pairs;
          for (const auto& st : model.pair_stats) pairs.emplace(st.pair, st);
          features::save_pair_tsv(pairs, export_features);
        }
      }
      std::cout << "trained vtt model (" << train_kind << ", "
                << model.word_weights.size() + model.pair_weights.size() << " features) -> "
                << train_out << "\n";
    } else if (train_method == "lsi") {
      pipeline::LsiTrainOptions options;
      options.k_words = k_words;
      options.k_components = k_components;
      options.boundary_partitions = boundary_partitions;
      options.test_fraction = test_fraction;
      options.seed = common.seed;
      lsi::LsiSpace space = pipeline::train_lsi(corpus, policy, *recognizer, options);
      lsi::save_space(space, train_out);
      std::cout << "trained lsi space (k=" << space.k << ", boundary m=" << space.boundary.m
                << " b=" << space.boundary.b << ") -> " << train_out << "\n";
    } else {
      std::cerr << "unknown --method " << train_method << "\n";
      return 2;
    }
    return 0;
  }

  if (*classify) {
    Corpus corpus = load_corpus(classify_corpus);
    if (!fusion_models.empty()) {
      if (fusion_train.empty()) {
        std::cerr << "--models needs --train\n";
        return 2;
      }
      Corpus train_c = load_corpus(fusion_train);
      std::vector<vtt::VttModel> vtt_models;
      lsi::LsiSpace space;
      bool have_space = false;
      for (const auto& path : fusion_models) {
        std::string format = model_format(path);
        if (format == "ppimine-vtt/1") {
          vtt_models.push_back(vtt::load_model(path));
        } else if (format == "ppimine-lsi/1") {
          space = lsi::load_space(path);
          have_space = true;
        } else {
          std::cerr << "unrecognized model file: " << path << "\n";
          return 2;
        }
      }
      std::vector<const vtt::VttModel*> ptrs;
      for (const auto& m : vtt_models) ptrs.push_back(&m);
      pipeline::FusedOptions options;
      options.cutoffs = common.cutoffs();
      if (common.config.get("fusion.vote_mode", "correctness_mask") == "shared")
        options.vote_mode = fusion::VoteMode::shared;
      pipeline::FusedOutput fused =
          pipeline::classify_fused(corpus, train_c, ptrs, have_space ? &space : nullptr, policy,
                                   *recognizer, options);
      pipeline::write_classify_tsv(fused.rows, classify_out);
      if (!fusion_report.empty()) fusion::save_fusion_report(fused.report, fusion_report);
      return 0;
    }
    if (classify_model.empty()) {
      std::cerr << "classify needs --model or --models\n";
      return 2;
    }
    std::string format = model_format(classify_model);
    if (format == "ppimine-vtt/1") {
      vtt::VttModel model = vtt::load_model(classify_model);
      auto rows = pipeline::classify_vtt(corpus, model, policy, *recognizer, common.cutoffs());
      pipeline::write_classify_tsv(rows, classify_out);
    } else if (format == "ppimine-lsi/1") {
      lsi::LsiSpace space = lsi::load_space(classify_model);
      auto rows = pipeline::classify_lsi(corpus, space, policy, *recognizer);
      write_lsi_tsv(rows, classify_out);
    } else {
      std::cerr << "unrecognized model file: " << classify_model << "\n";
      return 2;
    }
    return 0;
  }

  if (*evaluate) {
    Corpus corpus = load_corpus(eval_corpus);
    std::string format = model_format(eval_model);
    std::vector<pipeline::ClassifyRow> rows;
    if (format == "ppimine-vtt/1") {
      vtt::VttModel model = vtt::load_model(eval_model);
      rows = pipeline::classify_vtt(corpus, model, policy, *recognizer, common.cutoffs());
    } else if (format == "ppimine-lsi/1") {
      lsi::LsiSpace space = lsi::load_space(eval_model);
      for (const auto& r : pipeline::classify_lsi(corpus, space, policy, *recognizer)) {
        pipeline::ClassifyRow row;
        row.id = r.id;
        row.decision.label = r.label;
        row.decision.margin = r.margin;
        rows.push_back(row);
      }
    } else {
      std::cerr << "unrecognized model file: " << eval_model << "\n";
      return 2;
    }
    pipeline::Evaluation ev = pipeline::evaluate_rows(rows, corpus);
    pipeline::write_metrics_json(ev, eval_out);
    std::cout << "precision " << io::fmt(ev.metrics.precision) << "  recall "
              << io::fmt(ev.metrics.recall) << "  accuracy " << io::fmt(ev.metrics.accuracy)
              << "  F " << io::fmt(ev.metrics.f_score);
    if (ev.auc) std::cout << "  AUC " << io::fmt(*ev.auc);
    std::cout << "\n";
    return 0;
  }

  if (*sweep_cmd) {
    Corpus corpus = load_corpus(sweep_corpus);
    Corpus additional = load_corpus(sweep_additional);
    std::vector<vtt::FeatureKind> kinds;
    std::size_t pos = 0;
    while (pos <= sweep_kinds.size()) {
      std::size_t comma = sweep_kinds.find(',', pos);
      if (comma == std::string::npos) comma = sweep_kinds.size();
      if (comma > pos)
        kinds.push_back(vtt::feature_kind_from_string(sweep_kinds.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    eval::SweepResult result =
        eval::sweep(corpus, additional, grid, kinds, common.seed, policy, *recognizer,
                    sweep_options);
    eval::save_sweep_tsv(result, sweep_out);
    const auto& b = result.best;
    std::cout << "best cell: lambda0=" << io::fmt(b.lambda0) << " beta=" << b.beta << " kind="
              << vtt::to_string(b.kind) << " R=" << b.rank_product << " (ranks " << b.r_f_k
              << "," << b.r_a_k << "," << b.r_f_t << "," << b.r_a_t << ")\n";
    return 0;
  }

  if (*rank_cmd) {
    Corpus corpus = load_corpus(rank_corpus);
    Corpus train_c = load_corpus(rank_train);
    Corpus evidence = load_corpus(rank_evidence);
    if (rank_options.iss_combination < 1 || rank_options.iss_combination > 3) {
      std::cerr << "--iss-combination must be 1, 2 or 3\n";
      return 2;
    }
    pipeline::PassageOutputs outputs =
        pipeline::rank_passages(corpus, train_c, evidence, policy, *recognizer, rank_options);
    pipeline::write_ips_tsv(outputs.ips, ips_out);
    pipeline::write_iss_tsv(outputs.iss, iss_out);
    std::cout << outputs.ips.size() << " pair rows, " << outputs.iss.size()
              << " passage rows\n";
    return 0;
  }

  if (*net_cmd) {
    Corpus corpus = load_corpus(net_corpus);
    const Document* doc = corpus.find(net_doc);
    if (!doc) {
      std::cerr << "document not found: " << net_doc << "\n";
      return 2;
    }
    PreparedDoc prepared = prepare_document(*doc, policy);
    bool with_mentions = !common.lexicon_path.empty() || !common.mentions_path.empty();
    proxnet::ProximityNetwork net =
        proxnet::build_network(prepared, with_mentions ? recognizer.get() : nullptr);
    proxnet::save_edges_tsv(net.edges, net_out);
    if (!seeds.empty()) {
      expand_threshold = common.config.get_double("expand.threshold", expand_threshold);
      expand_limit = static_cast<std::size_t>(
          common.config.get_int("expand.limit", static_cast<int>(expand_limit)));
      proxnet::Expansion exp =
          proxnet::expand_features(net.incidence, seeds, expand_threshold, expand_limit);
      for (const auto& s : exp.seeds_missing)
        std::cerr << "warning: seed not in network: " << s << "\n";
      if (!expansion_out.empty()) {
        std::ofstream out(expansion_out);
        if (!out) throw std::runtime_error("cannot write expansion file: " + expansion_out);
        out << "node\tweight\trole\n";
        for (const auto& s : exp.seeds_found) out << s << "\t1\tseed\n";
        for (const auto& [name, w] : exp.neighbors)
          out << name << '\t' << io::fmt(w) << "\tneighbor\n";
      }
    }
    std::cout << net.incidence.nodes.size() << " nodes, " << net.edges.size() << " edges -> "
              << net_out << "\n";
    return 0;
  }

  if (*serve_cmd) {
    vtt::VttModel model = vtt::load_model(serve_model);
    service::ServiceOptions options;
    options.max_text_bytes = max_text_bytes;
    options.cutoffs = common.cutoffs();
    std::cout << "serving " << model.model_version << " on " << host << ":" << port << "\n";
    return service::run_service(model, policy, *recognizer, host, port, options);
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
