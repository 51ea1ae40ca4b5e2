#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "ppimine/corpus.hpp"
#include "testutil.hpp"

using namespace ppimine;

TEST_CASE("load_corpus reads JSON lines") {
  testutil::TempDir tmp;
  std::string path = tmp.file("c.jsonl");
  testutil::write_file(path,
                       R"({"id": "a", "text": "alpha text", "label": "positive"})"
                       "\n"
                       R"({"id": "b", "text": "beta text", "label": "negative"})"
                       "\n"
                       R"({"id": "c", "text": "para one para two", "paragraphs": ["para one", "para two"], "label": null})"
                       "\n");
  Corpus corpus = load_corpus(path);
  REQUIRE(corpus.size() == 3);
  CHECK(corpus.docs[0].label == Label::positive);
  CHECK(corpus.docs[1].label == Label::negative);
  CHECK(corpus.docs[2].label == Label::unlabeled);
  CHECK(corpus.docs[0].paragraphs == std::vector<std::string>{"alpha text"});
  CHECK(corpus.docs[2].paragraphs.size() == 2);
  CHECK(corpus.count(Label::positive) == 1);
  CHECK(corpus.find("b") != nullptr);
  CHECK(corpus.find("missing") == nullptr);
}

TEST_CASE("load_corpus rejects duplicates and malformed records") {
  testutil::TempDir tmp;

  SUBCASE("duplicate id") {
    std::string path = tmp.file("dup.jsonl");
    testutil::write_file(path,
                         R"({"id": "d1", "text": "x"})"
                         "\n"
                         R"({"id": "d1", "text": "y"})"
                         "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("duplicate id d1"),
                         std::runtime_error);
  }

  SUBCASE("missing text names the line") {
    std::string path = tmp.file("bad.jsonl");
    testutil::write_file(path,
                         R"({"id": "ok", "text": "x"})"
                         "\n"
                         R"({"id": "broken"})"
                         "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("line 2"), std::runtime_error);
  }

  SUBCASE("non-JSON line") {
    std::string path = tmp.file("garbage.jsonl");
    testutil::write_file(path, "not json at all\n");
    CHECK_THROWS_AS(load_corpus(path), std::runtime_error);
  }

  SUBCASE("paragraphs must concatenate to text") {
    std::string path = tmp.file("mismatch.jsonl");
    testutil::write_file(
        path, R"({"id": "m", "text": "completely different", "paragraphs": ["para one"]})"
              "\n");
    CHECK_THROWS_AS(load_corpus(path), std::runtime_error);
  }

  SUBCASE("unknown label") {
    std::string path = tmp.file("label.jsonl");
    testutil::write_file(path, R"({"id": "l", "text": "x", "label": "maybe"})"
                               "\n");
    CHECK_THROWS_AS(load_corpus(path), std::runtime_error);
  }
}

TEST_CASE("save and reload round-trips a corpus") {
  Corpus corpus = testutil::synthetic_corpus(3, 10);
  testutil::TempDir tmp;
  std::string path = tmp.file("rt.jsonl");
  save_corpus(corpus, path);
  Corpus again = load_corpus(path);
  REQUIRE(again.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(again.docs[i].id == corpus.docs[i].id);
    CHECK(again.docs[i].text == corpus.docs[i].text);
    CHECK(again.docs[i].label == corpus.docs[i].label);
  }
}

namespace {

Corpus labeled_corpus(std::size_t n_pos, std::size_t n_neg) {
  Corpus corpus;
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    Document d;
    d.id = "d" + std::to_string(i);
    d.text = "text";
    d.paragraphs = {"text"};
    d.label = i < n_pos ? Label::positive : Label::negative;
    corpus.docs.push_back(d);
  }
  return corpus;
}

}  // namespace

TEST_CASE("make_partitions balances the stated sizes") {
  Corpus corpus = labeled_corpus(50, 50);
  auto parts = make_partitions(corpus, 8, 0.25, 1);
  REQUIRE(parts.size() == 8);
  for (const auto& p : parts) {
    CHECK(p.test.size() == 24);  // floor(25) rounded down to even
    std::size_t pos = 0, neg = 0;
    for (const auto& id : p.test) {
      Label l = corpus.find(id)->label;
      if (l == Label::positive) ++pos;
      if (l == Label::negative) ++neg;
    }
    CHECK(pos == 12);
    CHECK(neg == 12);
  }
}

TEST_CASE("make_partitions rejects degenerate inputs") {
  CHECK_THROWS_WITH_AS(make_partitions(labeled_corpus(10, 0), 2, 0.25, 0),
                       doctest::Contains("insufficient"), std::runtime_error);
  CHECK_THROWS_AS(make_partitions(labeled_corpus(10, 10), 2, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_partitions(labeled_corpus(10, 10), 2, 1.0, 0), std::invalid_argument);
}

TEST_CASE("partition properties over random corpora") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Corpus corpus = testutil::synthetic_corpus(seed, 40 + seed * 14);
    auto parts = make_partitions(corpus, 6, 0.3, seed);
    std::set<std::string> all_ids;
    for (const auto& d : corpus.docs) all_ids.insert(d.id);
    for (const auto& p : parts) {
      std::set<std::string> train(p.train.begin(), p.train.end());
      std::set<std::string> test(p.test.begin(), p.test.end());
      // no overlap
      for (const auto& id : test) CHECK(!train.count(id));
      // exact balance
      std::size_t pos = 0, neg = 0;
      for (const auto& id : test) {
        Label l = corpus.find(id)->label;
        if (l == Label::positive) ++pos;
        else if (l == Label::negative) ++neg;
      }
      CHECK(pos == neg);
      CHECK(pos + neg == test.size());
      // union covers the corpus (excess joins training)
      std::set<std::string> both = train;
      both.insert(test.begin(), test.end());
      CHECK(both == all_ids);
    }
  }
}

TEST_CASE("partitions are reproducible from the seed") {
  Corpus corpus = testutil::synthetic_corpus(9, 60);
  auto a = make_partitions(corpus, 8, 0.25, 1234);
  auto b = make_partitions(corpus, 8, 0.25, 1234);
  auto c = make_partitions(corpus, 8, 0.25, 1235);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].train == b[i].train);
    CHECK(a[i].test == b[i].test);
    CHECK(a[i].seed == b[i].seed);
  }
  bool any_different = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].test != c[i].test) any_different = true;
  CHECK(any_different);
}

TEST_CASE("prepare_document keeps paragraph structure") {
  Document doc;
  doc.id = "p";
  doc.paragraphs = {"Protein binding happens here.", "Unrelated farming text follows."};
  doc.text = doc.paragraphs[0] + "\n" + doc.paragraphs[1];
  PreparedDoc pd = prepare_document(doc, StopwordPolicy::default_policy());
  REQUIRE(pd.para_stems.size() == 2);
  CHECK(pd.para_stems[0] == std::vector<std::string>{"protein", "bind", "happen"});
  std::vector<std::string> joined = pd.para_stems[0];
  joined.insert(joined.end(), pd.para_stems[1].begin(), pd.para_stems[1].end());
  CHECK(pd.stems == joined);
}
