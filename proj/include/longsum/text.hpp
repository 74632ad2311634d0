#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "longsum/common.hpp"
#include "longsum/stopwords.hpp"

namespace longsum {

// ASCII-only classification keeps tokenization deterministic and
// locale-independent; any non-ASCII byte acts as a separator.
inline bool is_word_char(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

inline std::string ascii_lower_copy(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](char c) { return ascii_lower(c); });
  return out;
}

inline std::string_view trim_view(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

struct Token {
  std::string surface;  // original form as it appeared in the text
  std::string norm;     // lowercased; never empty, never contains whitespace
};

struct Sentence {
  std::size_t index = 0;  // ordinal within the document, dense 0..N-1
  std::string text;
  std::vector<Token> tokens;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::optional<std::vector<Sentence>> reference;  // ground-truth abstract

  bool has_reference() const { return reference && !reference->empty(); }
};

// Splits on maximal runs of non-alphanumeric characters. Zero-length
// fragments are dropped, so every token's norm is non-empty.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_char(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    if (j > i) {
      Token t;
      t.surface = std::string(text.substr(i, j - i));
      t.norm = ascii_lower_copy(t.surface);
      out.push_back(std::move(t));
    }
    i = j;
  }
  return out;
}

namespace detail {

// Abbreviations that suppress a sentence split at '.'. All lowercase,
// trailing dot included; multi-word entries are matched as a unit.
inline const std::vector<std::string>& abbreviation_guards() {
  static const std::vector<std::string> guards = {
      "fig.", "figs.", "eq.",  "eqs.",  "sec.",  "secs.", "ref.",
      "refs.", "tab.",  "al.",  "et al.", "e.g.",  "i.e.",  "cf.",
      "vs.",  "resp.", "dr.",  "mr.",   "mrs.",  "ms.",   "prof.",
      "vol.", "pp.",
  };
  return guards;
}

// True when `segment` (which ends at a '.') ends in a guarded abbreviation
// preceded by a word boundary.
inline bool ends_in_abbreviation(std::string_view segment) {
  constexpr std::size_t kMaxGuard = 8;  // longest entry is "et al."
  const std::size_t tail_len = std::min(segment.size(), kMaxGuard);
  const std::string tail =
      ascii_lower_copy(segment.substr(segment.size() - tail_len));
  for (const std::string& guard : abbreviation_guards()) {
    if (guard.size() > tail.size()) continue;
    if (tail.compare(tail.size() - guard.size(), guard.size(), guard) != 0)
      continue;
    if (segment.size() == guard.size()) return true;
    char before = segment[segment.size() - guard.size() - 1];
    if (!is_word_char(before)) return true;
  }
  return false;
}

}  // namespace detail

// Splits raw text on '.', '!' or '?' followed by whitespace or end-of-input,
// with an abbreviation guard for '.'. Returns trimmed non-empty segments,
// terminators included.
inline std::vector<std::string> segment_sentences(std::string_view raw) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view seg = trim_view(raw.substr(start, end - start));
    if (!seg.empty()) out.emplace_back(seg);
    start = end;
  };
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c != '.' && c != '!' && c != '?') continue;
    bool at_boundary = i + 1 == raw.size() || is_space(raw[i + 1]);
    if (!at_boundary) continue;
    if (c == '.' &&
        detail::ends_in_abbreviation(raw.substr(start, i + 1 - start)))
      continue;
    flush(i + 1);
  }
  flush(raw.size());
  return out;
}

class StopwordList {
 public:
  StopwordList() = default;

  explicit StopwordList(const std::vector<std::string>& words) {
    for (const std::string& w : words) {
      std::string_view trimmed = trim_view(w);
      if (!trimmed.empty()) words_.insert(ascii_lower_copy(trimmed));
    }
    rehash();
  }

  bool contains(const std::string& norm) const { return words_.count(norm) > 0; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Order-insensitive content hash, recorded in every report so scoring runs
  // are attributable to the exact list used.
  std::uint64_t content_hash() const { return hash_; }
  std::string content_hash_hex() const { return hex64(hash_); }

  static const StopwordList& builtin() {
    static const StopwordList list = [] {
      std::vector<std::string> words;
      words.reserve(detail::kBuiltinStopwords.size());
      for (std::string_view w : detail::kBuiltinStopwords)
        words.emplace_back(w);
      return StopwordList(words);
    }();
    return list;
  }

  static StopwordList none() { return StopwordList(); }

  // One word per line; lines whose first non-blank character is '#' are
  // comments. Entries are lowercased.
  static StopwordList from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
      throw DataError("cannot open stopword file: " + path.string());
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      std::string_view trimmed = trim_view(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      words.emplace_back(trimmed);
    }
    return StopwordList(words);
  }

 private:
  void rehash() {
    std::vector<std::string> sorted(words_.begin(), words_.end());
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t h = kFnvOffsetBasis;
    for (const std::string& w : sorted) {
      h = fnv1a64(w, h);
      h = fnv1a64("\n", h);
    }
    hash_ = h;
  }

  std::unordered_set<std::string> words_;
  std::uint64_t hash_ = kFnvOffsetBasis;
};

// Keeps relative order; drops exactly the tokens whose norm is in `stops`.
inline std::vector<Token> remove_stopwords(const std::vector<Token>& tokens,
                                           const StopwordList& stops) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens)
    if (!stops.contains(t.norm)) out.push_back(t);
  return out;
}

inline Sentence make_sentence(std::size_t index, std::string text) {
  Sentence s;
  s.index = index;
  s.tokens = tokenize(text);
  s.text = std::move(text);
  return s;
}

inline std::vector<Sentence> make_sentences(
    const std::vector<std::string>& texts) {
  std::vector<Sentence> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i)
    out.push_back(make_sentence(i, texts[i]));
  return out;
}

inline Document make_document(std::string id,
                              const std::vector<std::string>& sentences,
                              const std::vector<std::string>& reference = {}) {
  Document doc;
  doc.id = std::move(id);
  doc.sentences = make_sentences(sentences);
  if (!reference.empty()) doc.reference = make_sentences(reference);
  return doc;
}

inline std::vector<std::string> flatten_norms(
    const std::vector<Sentence>& sentences) {
  std::vector<std::string> out;
  for (const Sentence& s : sentences)
    for (const Token& t : s.tokens) out.push_back(t.norm);
  return out;
}

inline std::string join_sentences(const std::vector<Sentence>& sentences) {
  std::string out;
  for (const Sentence& s : sentences) {
    if (!out.empty()) out += ' ';
    out += s.text;
  }
  return out;
}

}  // namespace longsum
