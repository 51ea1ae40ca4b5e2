#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ppimine/features.hpp"
#include "testutil.hpp"

using namespace ppimine;
using namespace ppimine::features;

namespace {

Corpus corpus_from_texts(const std::vector<std::pair<std::string, Label>>& texts) {
  Corpus corpus;
  std::size_t i = 0;
  for (const auto& [text, label] : texts) {
    Document d;
    d.id = "d" + std::to_string(i++);
    d.text = text;
    d.paragraphs = {text};
    d.label = label;
    corpus.docs.push_back(d);
  }
  return corpus;
}

}  // namespace

TEST_CASE("word_class_probs uses document-level presence") {
  Corpus corpus = corpus_from_texts({
      {"signal protein protein protein", Label::positive},  // repeats count once
      {"noise farming", Label::negative},
  });
  PreparedCorpus prepared = prepare_corpus(corpus, StopwordPolicy::default_policy());
  auto stats = word_class_probs(prepared);
  CHECK(stats.at("signal").p_tp == 1.0);
  CHECK(stats.at("signal").p_tn == 0.0);
  CHECK(stats.at("signal").s == 1.0);
  CHECK(stats.at("protein").p_tp == 1.0);
  CHECK(stats.at("nois").p_tn == 1.0);

  SUBCASE("word present in every document of both classes has S = 0") {
    Corpus c2 = corpus_from_texts({
        {"shared alpha", Label::positive},
        {"shared beta", Label::negative},
    });
    auto stats2 = word_class_probs(prepare_corpus(c2, StopwordPolicy::default_policy()));
    CHECK(stats2.at("share").p_tp == 1.0);
    CHECK(stats2.at("share").p_tn == 1.0);
    CHECK(stats2.at("share").s == 0.0);
  }

  SUBCASE("requires both classes") {
    Corpus only_pos = corpus_from_texts({{"lonely words", Label::positive}});
    CHECK_THROWS_AS(word_class_probs(prepare_corpus(only_pos, StopwordPolicy::default_policy())),
                    std::runtime_error);
    Corpus unlabeled = corpus_from_texts({{"lonely words", Label::unlabeled}});
    CHECK_THROWS_AS(
        word_class_probs(prepare_corpus(unlabeled, StopwordPolicy::default_policy())),
        std::runtime_error);
  }
}

TEST_CASE("probabilities are invariant to document order") {
  Corpus corpus = testutil::synthetic_corpus(21, 30);
  auto stats1 = word_class_probs(prepare_corpus(corpus, StopwordPolicy::default_policy()));
  std::reverse(corpus.docs.begin(), corpus.docs.end());
  auto stats2 = word_class_probs(prepare_corpus(corpus, StopwordPolicy::default_policy()));
  REQUIRE(stats1.size() == stats2.size());
  for (const auto& [stem, w] : stats1) {
    CHECK(stats2.at(stem).p_tp == w.p_tp);
    CHECK(stats2.at(stem).p_tn == w.p_tn);
  }
}

TEST_CASE("s equals |p_tp - p_tn| for every stat") {
  Corpus corpus = testutil::synthetic_corpus(33, 40);
  auto stats = word_class_probs(prepare_corpus(corpus, StopwordPolicy::default_policy()));
  for (const auto& [_, w] : stats) {
    CHECK(w.s == std::abs(w.p_tp - w.p_tn));
    CHECK(w.p_tp >= 0.0);
    CHECK(w.p_tp <= 1.0);
    CHECK(w.p_tn >= 0.0);
    CHECK(w.p_tn <= 1.0);
  }
}

TEST_CASE("select_top_words ranks by score with lexicographic ties") {
  std::map<std::string, WordStat> stats;
  stats["cc"] = {"cc", 0.5, 0.1, 0.4};
  stats["aa"] = {"aa", 0.3, 0.1, 0.2};
  stats["bb"] = {"bb", 0.4, 0.2, 0.2};
  stats["dd"] = {"dd", 0.9, 0.1, 0.8};

  WordFeatureSet top = select_top_words(stats, 3);
  REQUIRE(top.size() == 3);
  CHECK(top.ranked()[0].stem == "dd");
  CHECK(top.ranked()[1].stem == "cc");
  CHECK(top.ranked()[2].stem == "aa");  // tie 0.2: aa before bb
  CHECK(!top.short_of_k());
  CHECK(top.contains("dd"));
  CHECK(!top.contains("bb"));

  SUBCASE("all-equal scores give a lexicographic prefix") {
    std::map<std::string, WordStat> eq;
    for (const char* s : {"zeta", "yard", "apple", "mango"})
      eq[s] = {s, 0.5, 0.2, 0.3};
    WordFeatureSet t = select_top_words(eq, 2);
    CHECK(t.ranked()[0].stem == "apple");
    CHECK(t.ranked()[1].stem == "mango");
  }

  SUBCASE("K beyond vocabulary returns everything flagged short") {
    WordFeatureSet t = select_top_words(stats, 10);
    CHECK(t.size() == 4);
    CHECK(t.short_of_k());
  }

  SUBCASE("K = 0 is rejected") {
    CHECK_THROWS_AS(select_top_words(stats, 0), std::invalid_argument);
  }
}

TEST_CASE("filter_document keeps order and duplicates") {
  std::map<std::string, WordStat> stats;
  stats["a"] = {"a", 1, 0, 1};
  stats["b"] = {"b", 1, 0, 1};
  WordFeatureSet fs = select_top_words(stats, 2);
  CHECK(filter_document({"a", "x", "b", "x", "a"}, fs) ==
        std::vector<std::string>{"a", "b", "a"});
  CHECK(filter_document({"x", "y"}, fs) == std::vector<std::string>{});
  CHECK(filter_document({"a", "b"}, fs) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("doc_bigrams and doc_cooccur enumerate the stated pairs") {
  auto bi = doc_bigrams({"with", "interact", "protein"});
  CHECK(bi == std::set<StemPair>{{"with", "interact"}, {"interact", "protein"}});
  CHECK(doc_bigrams({"alone"}).empty());

  auto co = doc_cooccur({"c", "a", "b"});
  CHECK(co == std::set<StemPair>{{"a", "b"}, {"a", "c"}, {"b", "c"}});
  CHECK(doc_cooccur({"one"}).empty());
  CHECK(doc_cooccur({"dup", "dup"}).empty());  // distinct stems only
}

TEST_CASE("pair statistics cover only selected stems with presence semantics") {
  Corpus corpus = corpus_from_texts({
      {"alpha beta alpha beta", Label::positive},
      {"alpha gamma beta", Label::positive},
      {"gamma delta", Label::negative},
      {"delta beta", Label::negative},
  });
  PreparedCorpus prepared = prepare_corpus(corpus, StopwordPolicy::default_policy());
  auto stats = word_class_probs(prepared);
  WordFeatureSet top = select_top_words(stats, 3);

  auto bigrams = bigrams_plus(prepared, top);
  auto cooccur = cooccur_pairs(prepared, top);

  for (const auto& [pair, st] : bigrams) {
    CHECK(top.contains(pair.a));
    CHECK(top.contains(pair.b));
    CHECK(st.s_ab == std::abs(st.p_tp - st.p_tn));
    CHECK(st.kind == PairKind::bigram_plus);
  }
  for (const auto& [pair, st] : cooccur) {
    CHECK(top.contains(pair.a));
    CHECK(top.contains(pair.b));
    CHECK(pair.a < pair.b);
    CHECK(st.kind == PairKind::cooccur);
  }

  // repeated adjacency in doc 0 still counts once per document
  if (auto it = bigrams.find({"alpha", "beta"}); it != bigrams.end())
    CHECK(it->second.p_tp <= 1.0);
}

TEST_CASE("per-document bigram pairs are a subset of co-occurrence pairs") {
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<std::string> filtered;
    std::size_t len = rng() % 12;
    for (std::size_t i = 0; i < len; ++i)
      filtered.push_back(testutil::stable_word(rng() % 6));
    auto bi = doc_bigrams(filtered);
    auto co = doc_cooccur(filtered);
    for (const auto& p : bi) {
      if (p.a == p.b) continue;  // self-adjacency has no unordered counterpart
      StemPair unordered = p.a < p.b ? p : StemPair{p.b, p.a};
      CAPTURE(p.a);
      CAPTURE(p.b);
      CHECK(co.count(unordered) == 1);
    }
  }
}

TEST_CASE("lexicon recognizer counts distinct case-folded mentions") {
  LexiconRecognizer rec({"p53", "MDM2"});
  Document doc;
  doc.id = "m";
  doc.text = "p53 binds p53 and MDM2";
  doc.paragraphs = {doc.text};
  CHECK(count_mentions(doc, rec) == 2);

  SUBCASE("empty lexicon and no matches") {
    LexiconRecognizer empty(std::vector<std::string>{});
    CHECK(count_mentions(doc, empty) == 0);
    Document none;
    none.id = "n";
    none.text = "nothing to see";
    none.paragraphs = {none.text};
    CHECK(count_mentions(none, rec) == 0);
  }

  SUBCASE("matching is case-insensitive") {
    Document d2;
    d2.id = "x";
    d2.text = "P53 and mdm2 and p53";
    d2.paragraphs = {d2.text};
    CHECK(count_mentions(d2, rec) == 2);
  }

  SUBCASE("longest match wins") {
    LexiconRecognizer nested({"heat", "heat shock protein"});
    Document d3;
    d3.id = "y";
    d3.text = "the heat shock protein complex";
    d3.paragraphs = {d3.text};
    auto ms = nested.mentions(d3, d3.text);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0] == "heat shock protein");
  }

  SUBCASE("matches respect word boundaries") {
    Document d4;
    d4.id = "z";
    d4.text = "ap53x contains no mention but p53-mdm2 does";
    d4.paragraphs = {d4.text};
    CHECK(count_mentions(d4, rec) == 2);  // p53 and mdm2 around the hyphen
  }
}

TEST_CASE("precomputed recognizer reads JSONL and localizes in snippets") {
  testutil::TempDir tmp;
  std::string path = tmp.file("mentions.jsonl");
  testutil::write_file(path,
                       R"({"id": "d0", "mentions": ["BRCA1", "TP53"]})"
                       "\n"
                       R"({"id": "d1", "mentions": ["ku70"]})"
                       "\n");
  PrecomputedRecognizer rec = PrecomputedRecognizer::from_file(path);
  Document d0;
  d0.id = "d0";
  d0.text = "BRCA1 interacts with TP53; brca1 again.";
  d0.paragraphs = {d0.text};
  CHECK(count_mentions(d0, rec) == 2);
  CHECK(distinct_mentions(d0, "only TP53 here", rec) == std::vector<std::string>{"tp53"});
  Document unknown;
  unknown.id = "other";
  unknown.text = "BRCA1";
  unknown.paragraphs = {unknown.text};
  CHECK(count_mentions(unknown, rec) == 0);
}

TEST_CASE("feature TSV exports are written with ranks") {
  Corpus corpus = testutil::synthetic_corpus(55, 20);
  PreparedCorpus prepared = prepare_corpus(corpus, StopwordPolicy::default_policy());
  auto stats = word_class_probs(prepared);
  WordFeatureSet top = select_top_words(stats, 5);
  testutil::TempDir tmp;

  save_feature_tsv(top, tmp.file("features.tsv"));
  std::string content = testutil::read_file(tmp.file("features.tsv"));
  CHECK(content.find("feature\tp_tp\tp_tn\tscore\trank") == 0);

  save_score_histogram(stats, tmp.file("hist.tsv"));
  std::string hist = testutil::read_file(tmp.file("hist.tsv"));
  CHECK(hist.find("stem\trank\tscore") == 0);
  // one line per stem plus header
  CHECK(std::count(hist.begin(), hist.end(), '\n') == 1 + static_cast<long>(stats.size()));
}
