// Serial-versus-parallel timing of the hot kernels. Each kernel's parallel
// variant must reproduce the serial result; this harness reports the speedup.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>

#include "ppimine/la.hpp"
#include "ppimine/lsi.hpp"
#include "ppimine/proxnet.hpp"
#include "ppimine/vtt.hpp"
#include "testutil.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ppimine;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s < best) best = s;
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.3fs %10.3fs %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  int reps = quick ? 1 : 3;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

  std::mt19937_64 rng(1);

  {
    std::size_t rows = quick ? 60 : 400;
    std::size_t cols = quick ? 40 : 240;
    la::Matrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = testutil::uniform(rng, 0.0, 1.0);
    double ts = time_best_of(reps, [&] { la::thin_svd_serial(a); });
    double tp = time_best_of(reps, [&] { la::thin_svd_parallel(a); });
    report("jacobi svd", ts, tp);
  }

  {
    Corpus corpus = testutil::synthetic_corpus(2, quick ? 200 : 3000, 20, 200);
    PreparedCorpus prepared = prepare_corpus(corpus, StopwordPolicy::default_policy());
    vtt::VttModel model = vtt::train(prepared, vtt::FeatureKind::cooccur, 650, 1.0, 15);
    NullRecognizer none;
    double ts =
        time_best_of(reps, [&] { vtt::classify_corpus_serial(prepared, model, none); });
    double tp = time_best_of(reps, [&] { vtt::classify_corpus(prepared, model, none); });
    report("vtt corpus classification", ts, tp);
  }

  {
    std::size_t docs = quick ? 80 : 600;
    std::size_t dims = quick ? 40 : 200;
    lsi::DocMatrix m;
    m.m = la::Matrix(docs, dims);
    for (std::size_t i = 0; i < docs; ++i) {
      double n2 = 0.0;
      for (std::size_t j = 0; j < dims; ++j) {
        m.m(i, j) = testutil::uniform(rng, 0.0, 1.0);
        n2 += m.m(i, j) * m.m(i, j);
      }
      for (std::size_t j = 0; j < dims; ++j) m.m(i, j) /= std::sqrt(n2);
      m.doc_ids.push_back("d" + std::to_string(i));
      m.labels.push_back(i % 2 ? Label::negative : Label::positive);
      m.unprojectable.push_back(false);
    }
    lsi::LsiSpace space = lsi::fit_svd(m, std::min<std::size_t>(100, dims));
    la::Matrix tests(quick ? 60 : 400, dims);
    for (std::size_t i = 0; i < tests.rows(); ++i)
      for (std::size_t j = 0; j < dims; ++j) tests(i, j) = testutil::uniform(rng, 0.0, 1.0);
    double ts = time_best_of(reps, [&] { lsi::pi_nu_batch_serial(tests, space); });
    double tp = time_best_of(reps, [&] { lsi::pi_nu_batch(tests, space); });
    report("latent cosine scoring", ts, tp);
  }

  {
    Document storage;
    storage.id = "big";
    std::size_t paras = quick ? 20 : 60;
    std::size_t vocab = quick ? 220 : 900;
    for (std::size_t k = 0; k < paras; ++k) {
      std::string text;
      for (std::size_t w = 0; w < vocab / paras * 3; ++w)
        text += testutil::stable_word(rng() % vocab) + " ";
      storage.paragraphs.push_back(text);
      storage.text += text;
    }
    PreparedDoc doc = prepare_document(storage, StopwordPolicy::default_policy());
    proxnet::IncidenceMatrix m = proxnet::build_incidence(doc);
    std::printf("(proximity network: %zu nodes)\n", m.nodes.size());
    double ts = time_best_of(reps, [&] { proxnet::build_edges_serial(m); });
    double tp = time_best_of(reps, [&] { proxnet::build_edges(m); });
    report("proximity edge weights", ts, tp);
  }

  return 0;
}
