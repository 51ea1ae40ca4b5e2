#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ppimine/eval.hpp"
#include "testutil.hpp"

using namespace ppimine;
using namespace ppimine::eval;

TEST_CASE("confusion counts from aligned predictions") {
  std::vector<std::pair<std::string, Label>> truth = {
      {"a", Label::positive}, {"b", Label::positive}, {"c", Label::negative}};

  SUBCASE("all correct") {
    Confusion c = confusion(truth, truth);
    CHECK(c.tp == 2);
    CHECK(c.tn == 1);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);
  }

  SUBCASE("empty input gives all zeros") {
    Confusion c = confusion({}, {});
    CHECK(c.total() == 0);
  }

  SUBCASE("id mismatch lists the missing ids") {
    std::vector<std::pair<std::string, Label>> preds = {{"a", Label::positive}};
    CHECK_THROWS_WITH_AS(confusion(preds, truth), doctest::Contains("b"), std::runtime_error);
    std::vector<std::pair<std::string, Label>> extra = {{"a", Label::positive},
                                                        {"b", Label::negative},
                                                        {"c", Label::negative},
                                                        {"zz", Label::positive}};
    CHECK_THROWS_WITH_AS(confusion(extra, truth), doctest::Contains("zz"), std::runtime_error);
  }
}

TEST_CASE("published confusion table reproduces the printed metrics") {
  Confusion c{323, 133, 242, 52};
  REQUIRE(c.total() == 750);
  Metrics m = metrics(c);
  CHECK(std::abs(m.precision - 0.71) <= 0.005);
  CHECK(std::abs(m.recall - 0.86) <= 0.005);
  CHECK(std::abs(m.accuracy - 0.75) <= 0.005);
  CHECK(std::abs(m.f_score - 0.78) <= 0.005);
  CHECK(std::abs(m.error_rate - 0.25) <= 0.005);
  // the printed FP rate (0.36) disagrees with the printed counts; 133/375 is
  // the arithmetic truth
  CHECK(m.fp_rate == doctest::Approx(133.0 / 375.0).epsilon(1e-12));
  CHECK(std::abs(m.tp_rate - 0.86) <= 0.005);
}

TEST_CASE("metric edge cases") {
  SUBCASE("perfect classifier") {
    Metrics m = metrics({10, 0, 10, 0});
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.accuracy == 1.0);
    CHECK(m.f_score == 1.0);
    CHECK(m.error_rate == 0.0);
    CHECK(m.zero_flagged.empty());
  }

  SUBCASE("zero denominators are flagged, not NaN") {
    Metrics m = metrics({0, 0, 5, 5});
    CHECK(m.precision == 0.0);
    CHECK(std::find(m.zero_flagged.begin(), m.zero_flagged.end(), "precision") !=
          m.zero_flagged.end());
    CHECK(m.f_score == 0.0);
  }
}

TEST_CASE("metrics agree with the oracle on random confusion tables") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    long tp = rng() % 100, fp = rng() % 100, tn = rng() % 100, fn = rng() % 100;
    if (tp + fp + tn + fn == 0) tp = 1;
    Metrics mine = metrics({tp, fp, tn, fn});
    oracle::MetricValues ref = oracle::metrics(tp, fp, tn, fn);
    CHECK(mine.precision == ref.precision);
    CHECK(mine.recall == ref.recall);
    CHECK(mine.accuracy == ref.accuracy);
    CHECK(mine.f_score == ref.f_score);
    CHECK(mine.error_rate == ref.error_rate);
    CHECK(mine.fp_rate == ref.fp_rate);
    CHECK(mine.tp_rate == ref.tp_rate);
  }
}

TEST_CASE("auc basics") {
  SUBCASE("perfect separation") {
    CHECK(auc({5, 4, 1, 0}, {Label::positive, Label::positive, Label::negative,
                             Label::negative}) == 1.0);
  }
  SUBCASE("all scores equal") {
    CHECK(auc({2, 2, 2, 2}, {Label::positive, Label::positive, Label::negative,
                             Label::negative}) == 0.5);
  }
  SUBCASE("worked pair count") {
    // positives score 3 and 1, negative scores 2: one win, one loss
    CHECK(auc({3, 1, 2}, {Label::positive, Label::positive, Label::negative}) == 0.5);
  }
  SUBCASE("single class is an error") {
    CHECK_THROWS_AS(auc({1, 2}, {Label::positive, Label::positive}), std::invalid_argument);
  }
}

TEST_CASE("auc properties on random scores") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 100; ++iter) {
    std::size_t n = 4 + rng() % 30;
    std::vector<double> scores(n);
    std::vector<Label> labels(n);
    std::vector<bool> positive(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = testutil::uniform(rng, -3.0, 3.0);
      bool p = rng() % 2;
      if (i == 0) p = true;
      if (i == 1) p = false;
      labels[i] = p ? Label::positive : Label::negative;
      positive[i] = p;
      (p ? has_pos : has_neg) = true;
    }
    REQUIRE((has_pos && has_neg));

    double mine = auc(scores, labels);
    double ref = oracle::auc(scores, positive);
    CHECK(mine == doctest::Approx(ref).epsilon(1e-12));

    // auc(s) + auc(-s) = 1 with no ties (random doubles never tie)
    std::vector<double> neg = scores;
    for (auto& s : neg) s = -s;
    CHECK(auc(scores, labels) + auc(neg, labels) == doctest::Approx(1.0).epsilon(1e-12));

    // invariance under strictly monotone transforms
    std::vector<double> warped = scores;
    for (auto& s : warped) s = std::exp(0.5 * s) + 3.0 * s;
    CHECK(auc(warped, labels) == doctest::Approx(mine).epsilon(1e-12));
  }
}

TEST_CASE("sweep grids enumerate the stated values") {
  SweepGrid grid;
  auto lambdas = grid.lambda0_values();
  auto betas = grid.beta_values();
  CHECK(lambdas.size() == 41);  // 0 to 10 step 0.25
  CHECK(lambdas.front() == 0.0);
  CHECK(lambdas.back() == doctest::Approx(10.0));
  CHECK(betas.size() == 25);  // 1 to 50 step 2 -> 1, 3, ..., 49
  CHECK(betas.front() == 1);
  CHECK(betas.back() == 49);
}

TEST_CASE("sweep selects the minimal rank product deterministically") {
  Corpus corpus = testutil::synthetic_corpus(31, 80);
  Corpus additional = testutil::synthetic_corpus(32, 60);
  NullRecognizer none;
  SweepGrid grid{0.25, 0.75, 0.25, 5, 25, 10};  // 3 x 3
  SweepOptions options;
  options.k_words = 60;
  options.n_partitions = 4;

  SweepResult result = eval::sweep(corpus, additional, grid, {vtt::FeatureKind::word}, 9,
                                   StopwordPolicy::default_policy(), none, options);
  REQUIRE(result.table.size() == 9);

  SUBCASE("the winner attains the minimal rank product") {
    for (const auto& cell : result.table)
      CHECK(result.best.rank_product <= cell.rank_product);
  }

  SUBCASE("rank product is the product of its four ranks") {
    for (const auto& cell : result.table)
      CHECK(cell.rank_product ==
            static_cast<std::uint64_t>(cell.r_f_k) * cell.r_a_k * cell.r_f_t * cell.r_a_t);
  }

  SUBCASE("ranks are competition ranks recomputable from the table") {
    for (std::size_t i = 0; i < result.table.size(); ++i) {
      std::size_t better = 0;
      for (std::size_t j = 0; j < result.table.size(); ++j)
        if (result.table[j].mean_f_kfold > result.table[i].mean_f_kfold) ++better;
      CHECK(result.table[i].r_f_k == better + 1);
    }
  }

  SUBCASE("determinism given the seed") {
    SweepResult again = eval::sweep(corpus, additional, grid, {vtt::FeatureKind::word}, 9,
                                    StopwordPolicy::default_policy(), none, options);
    REQUIRE(again.table.size() == result.table.size());
    for (std::size_t i = 0; i < result.table.size(); ++i) {
      CHECK(again.table[i].mean_f_kfold == result.table[i].mean_f_kfold);
      CHECK(again.table[i].mean_acc_additional == result.table[i].mean_acc_additional);
      CHECK(again.table[i].rank_product == result.table[i].rank_product);
    }
    CHECK(again.best.lambda0 == result.best.lambda0);
    CHECK(again.best.beta == result.best.beta);
  }

  SUBCASE("table is written as TSV") {
    testutil::TempDir tmp;
    save_sweep_tsv(result, tmp.file("sweep.tsv"));
    std::string content = testutil::read_file(tmp.file("sweep.tsv"));
    CHECK(std::count(content.begin(), content.end(), '\n') == 10);  // header + 9 cells
  }
}

TEST_CASE("single-cell sweep wins with rank product 1") {
  Corpus corpus = testutil::synthetic_corpus(35, 40);
  Corpus additional = testutil::synthetic_corpus(36, 40);
  NullRecognizer none;
  SweepGrid grid{1.0, 1.0, 1.0, 15, 15, 2};
  SweepOptions options;
  options.k_words = 30;
  options.n_partitions = 2;
  SweepResult result = eval::sweep(corpus, additional, grid, {vtt::FeatureKind::word}, 1,
                                   StopwordPolicy::default_policy(), none, options);
  REQUIRE(result.table.size() == 1);
  CHECK(result.best.rank_product == 1);
  CHECK(result.best.r_f_k == 1);
}

TEST_CASE("sweep spans feature kinds in a kind-major table") {
  Corpus corpus = testutil::synthetic_corpus(38, 40);
  Corpus additional = testutil::synthetic_corpus(39, 32);
  NullRecognizer none;
  SweepGrid grid{1.0, 1.0, 1.0, 15, 15, 2};
  SweepOptions options;
  options.k_words = 30;
  options.n_partitions = 2;
  std::vector<vtt::FeatureKind> kinds = {vtt::FeatureKind::word, vtt::FeatureKind::bigram_plus,
                                         vtt::FeatureKind::cooccur};
  SweepResult result = eval::sweep(corpus, additional, grid, kinds, 4,
                                   StopwordPolicy::default_policy(), none, options);
  REQUIRE(result.table.size() == 3);
  CHECK(result.table[0].kind == vtt::FeatureKind::word);
  CHECK(result.table[1].kind == vtt::FeatureKind::bigram_plus);
  CHECK(result.table[2].kind == vtt::FeatureKind::cooccur);
  for (const auto& cell : result.table) CHECK(result.best.rank_product <= cell.rank_product);
}

TEST_CASE("empty sweep grid is rejected") {
  Corpus corpus = testutil::synthetic_corpus(37, 20);
  NullRecognizer none;
  SweepGrid grid;
  CHECK_THROWS_AS(eval::sweep(corpus, corpus, grid, {}, 0, StopwordPolicy::default_policy(),
                              none, {}),
                  std::invalid_argument);
}
