#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ppimine/textprep.hpp"

namespace ppimine {

enum class Label { positive, negative, unlabeled };

std::string to_string(Label label);

struct Document {
  std::string id;
  std::string text;                     // raw text, mention recognition runs on this
  std::vector<std::string> paragraphs;  // at least one; abstracts are a singleton
  Label label = Label::unlabeled;
};

struct Corpus {
  std::vector<Document> docs;

  std::size_t size() const { return docs.size(); }
  std::size_t count(Label label) const;
  const Document* find(const std::string& id) const;
};

/// JSON Lines, one record per line:
///   {"id": str, "text": str, "paragraphs": [str]?, "label": "positive"|"negative"|null}
/// Missing "paragraphs" means the whole text is one paragraph. Malformed
/// records and duplicate ids are rejected with the offending line / id named.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

struct Partition {
  std::vector<std::string> train;  // sorted doc ids
  std::vector<std::string> test;   // sorted doc ids, equally many positive and negative
  std::uint64_t seed = 0;          // sub-seed this partition was drawn with
};

/// n independent random partitions. Each test set holds
/// floor(test_fraction * |corpus|) documents rounded down to even, half
/// positive and half negative, sampled without replacement; everything else
/// (including unlabeled documents) trains. Fully determined by (corpus, seed).
std::vector<Partition> make_partitions(const Corpus& corpus, std::size_t n_partitions,
                                       double test_fraction, std::uint64_t seed);

// --- preprocessed views ----------------------------------------------------

struct PreparedDoc {
  const Document* doc = nullptr;
  std::vector<std::string> stems;                   // document-level sequence
  std::vector<std::vector<std::string>> para_stems; // per paragraph
};

struct PreparedCorpus {
  const Corpus* corpus = nullptr;
  std::vector<PreparedDoc> docs;

  std::size_t size() const { return docs.size(); }
};

PreparedDoc prepare_document(const Document& doc, const StopwordPolicy& policy);
PreparedCorpus prepare_corpus(const Corpus& corpus, const StopwordPolicy& policy);

}  // namespace ppimine
