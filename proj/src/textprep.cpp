#include "ppimine/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace ppimine {

StopwordPolicy::StopwordPolicy(std::set<std::string> words) : words_(std::move(words)) {
  words_.erase("with");
}

StopwordPolicy StopwordPolicy::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    std::string lower;
    lower.reserve(line.size());
    for (char c : line) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    words.insert(lower);
  }
  return StopwordPolicy(std::move(words));
}

const StopwordPolicy& StopwordPolicy::default_policy() {
  static const StopwordPolicy policy = [] {
    std::set<std::string> words;
    std::string_view list = embedded_stopword_list();
    std::size_t pos = 0;
    while (pos < list.size()) {
      std::size_t end = list.find('\n', pos);
      if (end == std::string_view::npos) end = list.size();
      if (end > pos) words.emplace(list.substr(pos, end - pos));
      pos = end + 1;
    }
    return StopwordPolicy(std::move(words));
  }();
  return policy;
}

namespace textprep {

namespace {

bool is_token_char(unsigned char c) { return std::isalnum(c) || c == '-'; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::size_t b = 0, e = cur.size();
    while (b < e && cur[b] == '-') ++b;
    while (e > b && cur[e - 1] == '-') --e;
    if (e > b) out.emplace_back(cur.substr(b, e - b));
    cur.clear();
  };
  for (unsigned char c : text) {
    if (is_token_char(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

// --- original 1980 Porter algorithm ---------------------------------------
//
// Within a step the longest matching suffix selects the rule; when that
// rule's condition fails, no other rule of the step applies.

namespace {

struct Stemmer {
  std::string w;

  bool is_cons(std::size_t i) const {
    char c = w[i];
    switch (c) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !is_cons(i - 1);
      default:
        return true;
    }
  }

  // m in [C](VC)^m[V], computed over the first `len` characters.
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && is_cons(i)) ++i;
    while (i < len) {
      while (i < len && !is_cons(i)) ++i;
      if (i == len) break;
      ++m;
      while (i < len && is_cons(i)) ++i;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i)
      if (!is_cons(i)) return true;
    return false;
  }

  bool double_cons(std::size_t len) const {
    return len >= 2 && w[len - 1] == w[len - 2] && is_cons(len - 1);
  }

  // *o: stem ends consonant-vowel-consonant, final consonant not w, x or y.
  bool ends_cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!is_cons(len - 3) || is_cons(len - 2) || !is_cons(len - 1)) return false;
    char c = w[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view sfx) const {
    return w.size() >= sfx.size() && std::equal(sfx.rbegin(), sfx.rend(), w.rbegin());
  }

  std::size_t stem_len(std::string_view sfx) const { return w.size() - sfx.size(); }

  struct Rule {
    std::string_view sfx;
    std::string_view rep;
    int min_m;  // condition m > min_m on the stem; -1 means unconditional
  };

  void apply_table(std::initializer_list<Rule> rules) {
    const Rule* best = nullptr;
    for (const Rule& r : rules) {
      if (ends(r.sfx) && (!best || r.sfx.size() > best->sfx.size())) best = &r;
    }
    if (!best) return;
    std::size_t len = stem_len(best->sfx);
    if (best->min_m >= 0 && measure(len) <= best->min_m) return;
    w.resize(len);
    w.append(best->rep);
  }

  void step1a() {
    apply_table({{"sses", "ss", -1}, {"ies", "i", -1}, {"ss", "ss", -1}, {"s", "", -1}});
  }

  void step1b() {
    if (ends("eed")) {
      if (measure(stem_len("eed")) > 0) w.pop_back();
      return;
    }
    bool fired = false;
    if (ends("ed")) {
      if (has_vowel(stem_len("ed"))) {
        w.resize(stem_len("ed"));
        fired = true;
      }
    } else if (ends("ing")) {
      if (has_vowel(stem_len("ing"))) {
        w.resize(stem_len("ing"));
        fired = true;
      }
    }
    if (!fired) return;
    if (ends("at") || ends("bl") || ends("iz")) {
      w.push_back('e');
    } else if (double_cons(w.size())) {
      char c = w.back();
      if (c != 'l' && c != 's' && c != 'z') w.pop_back();
    } else if (measure(w.size()) == 1 && ends_cvc(w.size())) {
      w.push_back('e');
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(stem_len("y"))) w.back() = 'i';
  }

  void step2() {
    apply_table({{"ational", "ate", 0}, {"tional", "tion", 0}, {"enci", "ence", 0},
                 {"anci", "ance", 0},   {"izer", "ize", 0},    {"abli", "able", 0},
                 {"alli", "al", 0},     {"entli", "ent", 0},   {"eli", "e", 0},
                 {"ousli", "ous", 0},   {"ization", "ize", 0}, {"ation", "ate", 0},
                 {"ator", "ate", 0},    {"alism", "al", 0},    {"iveness", "ive", 0},
                 {"fulness", "ful", 0}, {"ousness", "ous", 0}, {"aliti", "al", 0},
                 {"iviti", "ive", 0},   {"biliti", "ble", 0}});
  }

  void step3() {
    apply_table({{"icate", "ic", 0},
                 {"ative", "", 0},
                 {"alize", "al", 0},
                 {"iciti", "ic", 0},
                 {"ical", "ic", 0},
                 {"ful", "", 0},
                 {"ness", "", 0}});
  }

  void step4() {
    // "ion" additionally requires the stem to end in s or t.
    const Rule rules[] = {{"al", "", 1},   {"ance", "", 1}, {"ence", "", 1}, {"er", "", 1},
                          {"ic", "", 1},   {"able", "", 1}, {"ible", "", 1}, {"ant", "", 1},
                          {"ement", "", 1}, {"ment", "", 1}, {"ent", "", 1},  {"ion", "", 1},
                          {"ou", "", 1},   {"ism", "", 1},  {"ate", "", 1},  {"iti", "", 1},
                          {"ous", "", 1},  {"ive", "", 1},  {"ize", "", 1}};
    const Rule* best = nullptr;
    for (const Rule& r : rules)
      if (ends(r.sfx) && (!best || r.sfx.size() > best->sfx.size())) best = &r;
    if (!best) return;
    std::size_t len = stem_len(best->sfx);
    if (measure(len) <= 1) return;
    if (best->sfx == "ion" && !(len > 0 && (w[len - 1] == 's' || w[len - 1] == 't'))) return;
    w.resize(len);
  }

  void step5a() {
    if (!ends("e")) return;
    std::size_t len = w.size() - 1;
    int m = measure(len);
    if (m > 1 || (m == 1 && !ends_cvc(len))) w.pop_back();
  }

  void step5b() {
    if (w.size() >= 2 && w.back() == 'l' && double_cons(w.size()) && measure(w.size()) > 1)
      w.pop_back();
  }

  std::string run() {
    if (w.empty()) return w;
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return w;
  }
};

}  // namespace

std::string porter_stem(std::string_view token) {
  Stemmer st;
  st.w.reserve(token.size());
  for (char c : token)
    st.w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return st.run();
}

namespace {

// Length rule: tokens with two or fewer letters are dropped unless they carry
// a digit (protein names like "p53" must survive). Applied to surfaces before
// stemming and again to stems, so no short stem ever leaks downstream.
bool passes_length_rule(const std::string& token) {
  int letters = 0;
  for (unsigned char c : token) {
    if (std::isdigit(c)) return true;
    if (std::isalpha(c)) ++letters;
  }
  return letters > 2;
}

}  // namespace

std::vector<std::string> preprocess(std::string_view text, const StopwordPolicy& policy) {
  std::vector<std::string> out;
  for (std::string& tok : tokenize(text)) {
    if (!passes_length_rule(tok)) continue;
    if (policy.contains(tok)) continue;
    std::string stem = porter_stem(tok);
    if (!passes_length_rule(stem)) continue;
    out.push_back(std::move(stem));
  }
  return out;
}

}  // namespace textprep
}  // namespace ppimine
