#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "ppimine/proxnet.hpp"
#include "testutil.hpp"

using namespace ppimine;
using namespace ppimine::proxnet;

namespace {

PreparedDoc make_doc(Document& storage, std::vector<std::string> paragraphs) {
  storage.id = "doc";
  storage.paragraphs = paragraphs;
  storage.text.clear();
  for (const auto& p : paragraphs) {
    storage.text += p;
    storage.text += '\n';
  }
  return prepare_document(storage, StopwordPolicy::default_policy());
}

// random prepared document over a small stable vocabulary
PreparedDoc random_doc(Document& storage, std::mt19937_64& rng, std::size_t max_paras,
                       std::size_t vocab) {
  std::size_t n = 1 + rng() % max_paras;
  std::vector<std::string> paragraphs;
  for (std::size_t k = 0; k < n; ++k) {
    std::string text;
    std::size_t words = 1 + rng() % 8;
    for (std::size_t w = 0; w < words; ++w) text += testutil::stable_word(rng() % vocab) + " ";
    paragraphs.push_back(text);
  }
  return make_doc(storage, paragraphs);
}

}  // namespace

TEST_CASE("incidence matrix columns reflect paragraph membership") {
  Document storage;
  PreparedDoc doc = make_doc(storage, {"shared alpha words", "shared beta words"});
  IncidenceMatrix m = build_incidence(doc);

  auto idx = [&](const std::string& s) { return m.node_index(s); };
  REQUIRE(idx("share") >= 0);
  REQUIRE(idx("alpha") >= 0);
  CHECK(idx("absent") == -1);
  CHECK(m.n_paragraphs == 2);

  CHECK(wpp(m, "share", "share") == 1.0);     // self-weight
  CHECK(wpp(m, "share", "word") == 1.0);      // identical incidence
  CHECK(wpp(m, "alpha", "beta") == 0.0);      // disjoint
  CHECK(wpp(m, "share", "alpha") == 0.5);     // {1,2} vs {1}

  SUBCASE("documents without paragraphs are rejected") {
    PreparedDoc empty;
    Document d;
    empty.doc = &d;
    CHECK_THROWS_AS(build_incidence(empty), std::invalid_argument);
  }

  SUBCASE("spec incidence example: stems in overlapping paragraph sets") {
    Document s2;
    PreparedDoc d2 = make_doc(s2, {"aaa ccc", "aaa bbb ccc", "bbb ccc"});
    IncidenceMatrix m2 = build_incidence(d2);
    // aaa in {0,1}, bbb in {1,2}: intersection 1, union 3
    CHECK(wpp(m2, "aaa", "bbb") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  SUBCASE("single-paragraph document connects everything at weight 1") {
    Document s3;
    PreparedDoc d3 = make_doc(s3, {"alpha beta gamma"});
    IncidenceMatrix m3 = build_incidence(d3);
    for (std::size_t i = 0; i < m3.nodes.size(); ++i)
      for (std::size_t j = 0; j < m3.nodes.size(); ++j) CHECK(wpp(m3, i, j) == 1.0);
  }
}

TEST_CASE("edge weights match the set-based oracle") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 60; ++iter) {
    Document storage;
    PreparedDoc doc = random_doc(storage, rng, 10, 50);
    IncidenceMatrix m = build_incidence(doc);

    // rebuild incidence sets independently from the prepared paragraphs
    std::map<std::string, std::set<std::size_t>> sets;
    for (std::size_t k = 0; k < doc.para_stems.size(); ++k)
      for (const auto& s : doc.para_stems[k]) sets[s].insert(k);

    REQUIRE(m.nodes.size() == sets.size());
    for (std::size_t i = 0; i < m.nodes.size(); ++i)
      for (std::size_t j = i; j < m.nodes.size(); ++j) {
        double ref = oracle::jaccard(sets.at(m.nodes[i]), sets.at(m.nodes[j]));
        CHECK(std::abs(wpp(m, i, j) - ref) <= 1e-12);
      }
  }
}

TEST_CASE("network properties on random documents") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 100; ++iter) {
    Document storage;
    PreparedDoc doc = random_doc(storage, rng, 8, 30);
    IncidenceMatrix m = build_incidence(doc);
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
      CHECK(wpp(m, i, i) == 1.0);
      for (std::size_t j = i + 1; j < m.nodes.size(); ++j) {
        double w = wpp(m, i, j);
        CHECK(w == wpp(m, j, i));
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
      }
    }
  }
}

TEST_CASE("edge lists skip zero weights and match across kernels") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 20; ++iter) {
    Document storage;
    PreparedDoc doc = random_doc(storage, rng, 6, 25);
    IncidenceMatrix m = build_incidence(doc);
    auto serial = build_edges_serial(m);
    auto parallel = build_edges(m);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t e = 0; e < serial.size(); ++e) {
      CHECK(serial[e].a == parallel[e].a);
      CHECK(serial[e].b == parallel[e].b);
      CHECK(serial[e].w == parallel[e].w);
      CHECK(serial[e].w > 0.0);
      CHECK(serial[e].a < serial[e].b);
    }
  }
}

TEST_CASE("expansion collects neighbors above the threshold") {
  Document storage;
  PreparedDoc doc = make_doc(storage,
                             {"seed near words", "seed near other", "seed far", "far alone"});
  IncidenceMatrix m = build_incidence(doc);
  // wpp(seed, near) = 2/3; wpp(seed, far) = 1/4... seed in {0,1,2}, far in {2,3}
  CHECK(wpp(m, "seed", "near") == doctest::Approx(2.0 / 3.0));
  CHECK(wpp(m, "seed", "far") == doctest::Approx(0.25));

  SUBCASE("threshold filters") {
    Expansion e = expand_features(m, {"seed"}, 0.5, 10);
    std::set<std::string> names;
    for (const auto& [n, _] : e.neighbors) names.insert(n);
    CHECK(names.count("near"));
    CHECK(!names.count("far"));
    CHECK(e.seeds_found == std::vector<std::string>{"seed"});
  }

  SUBCASE("threshold 1.0 keeps only perfectly co-incident nodes") {
    Expansion e = expand_features(m, {"near"}, 1.0, 10);
    // "near" appears in paragraphs {0,1}; nothing else shares exactly that set
    for (const auto& [n, w] : e.neighbors) CHECK(w == 1.0);
  }

  SUBCASE("missing seeds are skipped with a warning") {
    Expansion e = expand_features(m, {"seed", "unicorn"}, 0.5, 10);
    CHECK(e.seeds_missing == std::vector<std::string>{"unicorn"});
    CHECK(e.seeds_found == std::vector<std::string>{"seed"});
  }

  SUBCASE("limit truncates the ranked list") {
    Expansion e = expand_features(m, {"seed"}, 0.01, 1);
    CHECK(e.neighbors.size() == 1);
    CHECK(e.neighbors[0].first == "near");  // highest weight survives
  }

  SUBCASE("invalid thresholds are rejected") {
    CHECK_THROWS_AS(expand_features(m, {"seed"}, 0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(expand_features(m, {"seed"}, 1.5, 5), std::invalid_argument);
  }
}

TEST_CASE("expansion grows monotonically as the threshold drops") {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 100; ++iter) {
    Document storage;
    PreparedDoc doc = random_doc(storage, rng, 8, 30);
    IncidenceMatrix m = build_incidence(doc);
    if (m.nodes.empty()) continue;
    std::vector<std::string> seeds = {m.nodes[rng() % m.nodes.size()]};

    std::set<std::string> previous;
    for (double threshold : {1.0, 0.75, 0.5, 0.25, 0.05}) {
      Expansion e = expand_features(m, seeds, threshold, 1000);
      std::set<std::string> current;
      for (const auto& [n, _] : e.neighbors) current.insert(n);
      for (const auto& n : previous) CHECK(current.count(n) == 1);
      previous = std::move(current);
    }
  }
}

TEST_CASE("mention nodes let protein names survive stemming damage") {
  // "mthsp70" style names live in paragraphs next to context words
  Document storage;
  storage.id = "art";
  storage.paragraphs = {
      "The mtHSP70 chaperone binds DNA with high specificity.",
      "Binding of mtHSP70 reveals specific protein contacts with DNA.",
      "Farming text without the name.",
  };
  storage.text = storage.paragraphs[0] + " " + storage.paragraphs[1] + " " +
                 storage.paragraphs[2];
  PreparedDoc doc = prepare_document(storage, StopwordPolicy::default_policy());

  LexiconRecognizer rec({"mtHSP70"});
  IncidenceMatrix m = build_incidence(doc, &rec);
  REQUIRE(m.node_index("mthsp70") >= 0);

  Expansion e = expand_features(m, {"mthsp70"}, 0.5, 20);
  std::set<std::string> got;
  for (const auto& [n, _] : e.neighbors) got.insert(n);
  // context stems of the name's paragraphs come back as features
  CHECK(got.count("dna"));
  CHECK(got.count("with"));
  CHECK(got.count("bind"));
  CHECK(got.count("specif"));
  CHECK(!got.count("farm"));
}

TEST_CASE("edge TSV export") {
  Document storage;
  PreparedDoc doc = make_doc(storage, {"alpha beta", "beta gamma"});
  ProximityNetwork net = build_network(doc);
  testutil::TempDir tmp;
  save_edges_tsv(net.edges, tmp.file("edges.tsv"));
  std::string content = testutil::read_file(tmp.file("edges.tsv"));
  CHECK(content.find("node_a\tnode_b\twpp") == 0);
  CHECK(content.find("alpha\tbeta") != std::string::npos);
}
