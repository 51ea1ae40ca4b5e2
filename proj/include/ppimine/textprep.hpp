#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ppimine {

/// Lowercase stopword set. "with" is stripped on construction and can never
/// be a member: it carries signal in interaction phrases and every stage of
/// the pipeline relies on it surviving.
class StopwordPolicy {
 public:
  StopwordPolicy() = default;
  explicit StopwordPolicy(std::set<std::string> words);

  static const StopwordPolicy& default_policy();  // embedded SMART-derived list
  static StopwordPolicy from_file(const std::string& path);  // one word per line

  bool contains(const std::string& word) const { return words_.count(word) > 0; }
  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

/// The embedded stopword list as shipped (newline separated, sorted).
std::string_view embedded_stopword_list();

namespace textprep {

/// Lowercases and splits on every character that is not a letter, digit or
/// hyphen; hyphens survive only inside a token ("two-hybrid" stays whole,
/// leading/trailing hyphens are stripped).
std::vector<std::string> tokenize(std::string_view text);

/// Suffix stripping per the original 1980 Porter algorithm. Expects (or
/// forces) lowercase input.
std::string porter_stem(std::string_view token);

/// tokenize, drop short words (two or fewer letters, unless the token carries
/// a digit), drop stopwords, stem, and drop stems that fall under the length
/// rule after stripping. Order and duplicates are preserved.
std::vector<std::string> preprocess(std::string_view text, const StopwordPolicy& policy);

}  // namespace textprep
}  // namespace ppimine
