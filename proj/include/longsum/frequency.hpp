#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "longsum/common.hpp"
#include "longsum/text.hpp"

namespace longsum {

// word norm -> accumulated value (weight x occurrence count).
using WordValueTable = std::unordered_map<std::string, double>;

struct WordWeights {
  double default_weight = 1.0;
  std::unordered_map<std::string, double> overrides;

  double weight(const std::string& norm) const {
    auto it = overrides.find(norm);
    return it == overrides.end() ? default_weight : it->second;
  }

  // Override file format: "word<TAB>weight", one per line, '#' comments.
  static WordWeights from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open word-weight file: " + path.string());
    WordWeights w;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string_view trimmed = trim_view(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      auto tab = trimmed.find('\t');
      if (tab == std::string_view::npos)
        throw DataError("word-weight file " + path.string() + " line " +
                        std::to_string(lineno) + ": expected word<TAB>weight");
      std::string word = ascii_lower_copy(trim_view(trimmed.substr(0, tab)));
      double value = 0;
      try {
        value = std::stod(std::string(trim_view(trimmed.substr(tab + 1))));
      } catch (const std::exception&) {
        throw DataError("word-weight file " + path.string() + " line " +
                        std::to_string(lineno) + ": bad weight");
      }
      if (word.empty() || value <= 0)
        throw DataError("word-weight file " + path.string() + " line " +
                        std::to_string(lineno) +
                        ": weights must be positive and words non-empty");
      w.overrides[word] = value;
    }
    return w;
  }
};

struct ScoredSentence {
  std::size_t index = 0;
  double score = 0.0;
};

// Rule that fixes how many sentences an extractor emits.
struct MPolicy {
  enum class Kind { fixed, reference_length, ratio };

  Kind kind = Kind::reference_length;
  std::size_t count = 0;  // fixed
  double fraction = 0.0;  // ratio, in (0, 1]

  static MPolicy fixed(std::size_t k) {
    if (k == 0) throw ConfigError("m-policy fixed:K requires K >= 1");
    return MPolicy{Kind::fixed, k, 0.0};
  }
  static MPolicy reference_length() {
    return MPolicy{Kind::reference_length, 0, 0.0};
  }
  static MPolicy ratio(double p) {
    if (!(p > 0.0) || p > 1.0)
      throw ConfigError("m-policy ratio:P requires P in (0, 1]");
    return MPolicy{Kind::ratio, 0, p};
  }

  // Accepted forms: "fixed:K", "ref", "ratio:P".
  static MPolicy parse(std::string_view text) {
    std::string_view t = trim_view(text);
    if (t == "ref" || t == "reference" || t == "reference_length")
      return reference_length();
    if (t.rfind("fixed:", 0) == 0) {
      long k = -1;
      try {
        k = std::stol(std::string(t.substr(6)));
      } catch (const std::exception&) {
      }
      if (k < 1)
        throw ConfigError("bad m-policy '" + std::string(text) +
                          "': fixed:K requires integer K >= 1");
      return fixed(static_cast<std::size_t>(k));
    }
    if (t.rfind("ratio:", 0) == 0) {
      double p = 0.0;
      try {
        p = std::stod(std::string(t.substr(6)));
      } catch (const std::exception&) {
      }
      if (!(p > 0.0) || p > 1.0)
        throw ConfigError("bad m-policy '" + std::string(text) +
                          "': ratio:P requires real P in (0, 1]");
      return ratio(p);
    }
    throw ConfigError("bad m-policy '" + std::string(text) +
                      "': expected fixed:K, ref or ratio:P");
  }

  std::string str() const {
    switch (kind) {
      case Kind::fixed:
        return "fixed:" + std::to_string(count);
      case Kind::reference_length:
        return "ref";
      case Kind::ratio: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "ratio:%g", fraction);
        return buf;
      }
    }
    return "ref";
  }
};

// Value of each non-stopword norm: weight(w) x occurrences of w across the
// whole document. Stopwords never enter the table.
inline WordValueTable word_values(const Document& doc,
                                  const StopwordList& stops,
                                  const WordWeights& weights = {}) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const Sentence& s : doc.sentences)
    for (const Token& t : s.tokens)
      if (!stops.contains(t.norm)) ++counts[t.norm];
  WordValueTable table;
  table.reserve(counts.size());
  for (const auto& [norm, count] : counts)
    table[norm] = weights.weight(norm) * static_cast<double>(count);
  return table;
}

// Sentence score: sum of table values over token occurrences. Words absent
// from the table (stopwords, foreign vocabulary) contribute 0; repeated
// occurrences each contribute.
inline std::vector<ScoredSentence> sentence_values(
    const Document& doc, const WordValueTable& table) {
  std::vector<ScoredSentence> out;
  out.reserve(doc.sentences.size());
  for (const Sentence& s : doc.sentences) {
    double score = 0.0;
    for (const Token& t : s.tokens) {
      auto it = table.find(t.norm);
      if (it != table.end()) score += it->second;
    }
    out.push_back({s.index, score});
  }
  return out;
}

// Resolves the policy to a concrete sentence count in [1, N].
inline std::size_t resolve_m(const MPolicy& policy, const Document& doc) {
  const std::size_t n = doc.sentences.size();
  if (n == 0) throw DataError("document '" + doc.id + "' has no sentences");
  std::size_t m = 1;
  switch (policy.kind) {
    case MPolicy::Kind::fixed:
      m = std::min(policy.count, n);
      break;
    case MPolicy::Kind::reference_length:
      if (!doc.has_reference())
        throw DataError("m-policy 'ref' requires a reference summary, but "
                        "document '" +
                        doc.id + "' has none");
      m = std::min(doc.reference->size(), n);
      break;
    case MPolicy::Kind::ratio:
      m = static_cast<std::size_t>(
          std::llround(policy.fraction * static_cast<double>(n)));
      break;
  }
  return std::clamp<std::size_t>(m, 1, n);
}

// Indices of the m best-scoring sentences, ties broken by lower index,
// returned in ascending (document) order.
inline std::vector<std::size_t> select_top_indices(
    const std::vector<ScoredSentence>& scored, std::size_t m) {
  std::vector<ScoredSentence> ranked(scored);
  std::sort(ranked.begin(), ranked.end(),
            [](const ScoredSentence& a, const ScoredSentence& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.index < b.index;
            });
  m = std::min(m, ranked.size());
  std::vector<std::size_t> indices;
  indices.reserve(m);
  for (std::size_t i = 0; i < m; ++i) indices.push_back(ranked[i].index);
  std::sort(indices.begin(), indices.end());
  return indices;
}

// New document holding the given sentences of `doc`, reindexed densely.
// Keeps the source id and reference.
inline Document subdocument(const Document& doc,
                            const std::vector<std::size_t>& indices) {
  Document out;
  out.id = doc.id;
  out.reference = doc.reference;
  out.sentences.reserve(indices.size());
  for (std::size_t idx : indices) {
    Sentence s = doc.sentences.at(idx);
    s.index = out.sentences.size();
    out.sentences.push_back(std::move(s));
  }
  return out;
}

inline Document select_top_m(const std::vector<ScoredSentence>& scored,
                             std::size_t m, const Document& doc) {
  return subdocument(doc, select_top_indices(scored, m));
}

// Frequency-driven extraction: value words by weighted counts, score
// sentences by summed word values, keep the top M.
inline Document freq_extract(const Document& doc, const StopwordList& stops,
                             const WordWeights& weights,
                             const MPolicy& policy) {
  WordValueTable table = word_values(doc, stops, weights);
  std::vector<ScoredSentence> scored = sentence_values(doc, table);
  return select_top_m(scored, resolve_m(policy, doc), doc);
}

}  // namespace longsum
