#include "ppimine/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppimine {

using nlohmann::json;

std::string to_string(Label label) {
  switch (label) {
    case Label::positive: return "positive";
    case Label::negative: return "negative";
    default: return "unlabeled";
  }
}

std::size_t Corpus::count(Label label) const {
  std::size_t n = 0;
  for (const auto& d : docs)
    if (d.label == label) ++n;
  return n;
}

const Document* Corpus::find(const std::string& id) const {
  for (const auto& d : docs)
    if (d.id == id) return &d;
  return nullptr;
}

namespace {

std::string strip_ws(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s)
    if (!std::isspace(c)) out.push_back(static_cast<char>(c));
  return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("corpus parse error at line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  Corpus corpus;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) parse_fail(line_no, "not a JSON object");
    if (!rec.contains("id") || !rec["id"].is_string()) parse_fail(line_no, "missing \"id\"");
    if (!rec.contains("text") || !rec["text"].is_string()) parse_fail(line_no, "missing \"text\"");

    Document doc;
    doc.id = rec["id"].get<std::string>();
    doc.text = rec["text"].get<std::string>();
    if (!seen.insert(doc.id).second) throw std::runtime_error("duplicate id " + doc.id);

    if (rec.contains("paragraphs") && !rec["paragraphs"].is_null()) {
      if (!rec["paragraphs"].is_array() || rec["paragraphs"].empty())
        parse_fail(line_no, "\"paragraphs\" must be a non-empty array");
      std::string joined;
      for (const auto& p : rec["paragraphs"]) {
        if (!p.is_string()) parse_fail(line_no, "paragraph entries must be strings");
        doc.paragraphs.push_back(p.get<std::string>());
        joined += doc.paragraphs.back();
      }
      if (strip_ws(joined) != strip_ws(doc.text))
        parse_fail(line_no, "paragraphs do not concatenate to text (id " + doc.id + ")");
    } else {
      doc.paragraphs.push_back(doc.text);
    }

    if (rec.contains("label") && !rec["label"].is_null()) {
      std::string l = rec["label"].get<std::string>();
      if (l == "positive")
        doc.label = Label::positive;
      else if (l == "negative")
        doc.label = Label::negative;
      else
        parse_fail(line_no, "unknown label \"" + l + "\"");
    }
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  for (const auto& d : corpus.docs) {
    json rec;
    rec["id"] = d.id;
    rec["text"] = d.text;
    if (d.paragraphs.size() != 1 || d.paragraphs[0] != d.text) rec["paragraphs"] = d.paragraphs;
    if (d.label == Label::unlabeled)
      rec["label"] = nullptr;
    else
      rec["label"] = to_string(d.label);
    out << rec.dump() << '\n';
  }
}

namespace {

// Fisher-Yates with an explicit modulo draw: reproducible regardless of the
// standard library's shuffle implementation.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::vector<Partition> make_partitions(const Corpus& corpus, std::size_t n_partitions,
                                       double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must lie in (0,1)");

  std::vector<std::string> pos_ids, neg_ids, all_ids;
  for (const auto& d : corpus.docs) {
    all_ids.push_back(d.id);
    if (d.label == Label::positive) pos_ids.push_back(d.id);
    if (d.label == Label::negative) neg_ids.push_back(d.id);
  }
  std::sort(pos_ids.begin(), pos_ids.end());
  std::sort(neg_ids.begin(), neg_ids.end());
  std::sort(all_ids.begin(), all_ids.end());

  std::size_t n_test = static_cast<std::size_t>(test_fraction * static_cast<double>(corpus.size()));
  n_test -= n_test % 2;  // even-rounding keeps the test set exactly balanced
  std::size_t half = n_test / 2;
  if (half == 0) throw std::invalid_argument("corpus too small for the requested test fraction");
  if (pos_ids.size() < half || neg_ids.size() < half) {
    throw std::runtime_error(
        "insufficient labeled documents: need " + std::to_string(half) + " of each class, have " +
        std::to_string(pos_ids.size()) + " positive and " + std::to_string(neg_ids.size()) +
        " negative");
  }

  std::mt19937_64 master(seed);
  std::vector<Partition> parts;
  parts.reserve(n_partitions);
  for (std::size_t p = 0; p < n_partitions; ++p) {
    Partition part;
    part.seed = master();
    std::mt19937_64 rng(part.seed);

    std::vector<std::string> pos = pos_ids, neg = neg_ids;
    deterministic_shuffle(pos, rng);
    deterministic_shuffle(neg, rng);

    std::set<std::string> test(pos.begin(), pos.begin() + static_cast<long>(half));
    test.insert(neg.begin(), neg.begin() + static_cast<long>(half));
    part.test.assign(test.begin(), test.end());
    for (const auto& id : all_ids)
      if (!test.count(id)) part.train.push_back(id);
    parts.push_back(std::move(part));
  }
  return parts;
}

PreparedDoc prepare_document(const Document& doc, const StopwordPolicy& policy) {
  PreparedDoc out;
  out.doc = &doc;
  out.para_stems.reserve(doc.paragraphs.size());
  for (const auto& para : doc.paragraphs) {
    out.para_stems.push_back(textprep::preprocess(para, policy));
    out.stems.insert(out.stems.end(), out.para_stems.back().begin(),
                     out.para_stems.back().end());
  }
  return out;
}

PreparedCorpus prepare_corpus(const Corpus& corpus, const StopwordPolicy& policy) {
  PreparedCorpus out;
  out.corpus = &corpus;
  out.docs.resize(corpus.docs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < static_cast<long>(corpus.docs.size()); ++i)
    out.docs[static_cast<std::size_t>(i)] =
        prepare_document(corpus.docs[static_cast<std::size_t>(i)], policy);
  return out;
}

}  // namespace ppimine
