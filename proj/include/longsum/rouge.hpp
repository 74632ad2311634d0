#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "longsum/common.hpp"
#include "longsum/text.hpp"

namespace longsum {

struct RougeVariant {
  enum class Kind { ngram, lcs };

  Kind kind = Kind::ngram;
  int n = 1;  // meaningful for Kind::ngram only

  static RougeVariant ngram(int order) {
    if (order < 1) throw ConfigError("rouge-N requires N >= 1");
    return RougeVariant{Kind::ngram, order};
  }
  static RougeVariant lcs() { return RougeVariant{Kind::lcs, 0}; }

  // "r1", "r2", ... for n-gram variants; "rl" for LCS.
  static RougeVariant parse(std::string_view text) {
    std::string t = ascii_lower_copy(trim_view(text));
    if (t == "rl" || t == "rouge-l" || t == "l") return lcs();
    std::string_view digits = t;
    if (digits.rfind("rouge-", 0) == 0)
      digits.remove_prefix(6);
    else if (!digits.empty() && digits.front() == 'r')
      digits.remove_prefix(1);
    int order = 0;
    try {
      order = std::stoi(std::string(digits));
    } catch (const std::exception&) {
    }
    if (order < 1)
      throw ConfigError("bad rouge variant '" + std::string(text) +
                        "': expected r1, r2, ... or rl");
    return ngram(order);
  }

  std::string str() const {
    return kind == Kind::lcs ? "rl" : "r" + std::to_string(n);
  }

  friend bool operator==(const RougeVariant& a, const RougeVariant& b) {
    return a.kind == b.kind && (a.kind == Kind::lcs || a.n == b.n);
  }
  friend bool operator<(const RougeVariant& a, const RougeVariant& b) {
    if (a.kind != b.kind) return a.kind == Kind::ngram;  // n-grams before lcs
    return a.kind == Kind::ngram && a.n < b.n;
  }
};

// Comma-separated list, e.g. "r1,r2,rl"; deduplicated, canonical order.
inline std::vector<RougeVariant> parse_variants(std::string_view text) {
  std::vector<RougeVariant> out;
  std::size_t start = 0;
  std::string s(text);
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    std::string_view item(s.data() + start, (comma == std::string::npos
                                                 ? s.size()
                                                 : comma) - start);
    if (!trim_view(item).empty()) out.push_back(RougeVariant::parse(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw ConfigError("empty rouge variant list");
  return out;
}

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static RougeScore from_counts(double matches, double candidate_total,
                                double reference_total) {
    RougeScore s;
    s.precision = candidate_total > 0 ? matches / candidate_total : 0.0;
    s.recall = reference_total > 0 ? matches / reference_total : 0.0;
    s.f1 = (s.precision + s.recall) > 0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
  }
};

struct NgramCounts {
  // n-gram (tokens joined with single spaces) -> multiplicity
  std::unordered_map<std::string, int> counts;
  long long total = 0;  // == max(0, |tokens| - n + 1)
};

inline NgramCounts ngram_counts(const std::vector<std::string>& tokens,
                                int n) {
  if (n < 1) throw ConfigError("ngram_counts requires n >= 1");
  NgramCounts out;
  if (tokens.size() < static_cast<std::size_t>(n)) return out;
  const std::size_t windows = tokens.size() - static_cast<std::size_t>(n) + 1;
  out.counts.reserve(windows);
  for (std::size_t i = 0; i < windows; ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key += ' ';
      key += tokens[i + static_cast<std::size_t>(j)];
    }
    ++out.counts[key];
    ++out.total;
  }
  return out;
}

// Clipped n-gram overlap: each n-gram is matched at most min(candidate
// count, reference count) times, which avoids over-counting repeats.
inline RougeScore rouge_n(const std::vector<std::string>& candidate,
                          const std::vector<std::string>& reference, int n) {
  NgramCounts cand = ngram_counts(candidate, n);
  NgramCounts ref = ngram_counts(reference, n);
  long long matches = 0;
  for (const auto& [gram, count] : cand.counts) {
    auto it = ref.counts.find(gram);
    if (it != ref.counts.end()) matches += std::min(count, it->second);
  }
  return RougeScore::from_counts(static_cast<double>(matches),
                                 static_cast<double>(cand.total),
                                 static_cast<double>(ref.total));
}

// Longest common subsequence length, O(|a|*|b|) time, two rolling rows.
inline std::size_t lcs_length(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1])
        curr[j] = prev[j - 1] + 1;
      else
        curr[j] = std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

// Summary-level LCS over the flattened token sequences.
inline RougeScore rouge_l(const std::vector<std::string>& candidate,
                          const std::vector<std::string>& reference) {
  const std::size_t lcs = lcs_length(candidate, reference);
  return RougeScore::from_counts(static_cast<double>(lcs),
                                 static_cast<double>(candidate.size()),
                                 static_cast<double>(reference.size()));
}

inline RougeScore score_tokens(const std::vector<std::string>& candidate,
                               const std::vector<std::string>& reference,
                               const RougeVariant& variant) {
  return variant.kind == RougeVariant::Kind::lcs
             ? rouge_l(candidate, reference)
             : rouge_n(candidate, reference, variant.n);
}

inline std::map<RougeVariant, RougeScore> score_token_sequences(
    const std::vector<std::string>& candidate,
    const std::vector<std::string>& reference,
    const std::vector<RougeVariant>& variants) {
  if (reference.empty())
    throw DataError("cannot score against an empty reference");
  std::map<RougeVariant, RougeScore> out;
  for (const RougeVariant& v : variants)
    out[v] = score_tokens(candidate, reference, v);
  return out;
}

// Scores two documents by flattening each to its norm-token sequence.
// Stopwords are retained; the tokenizer is the only normalization applied.
inline std::map<RougeVariant, RougeScore> score_document(
    const Document& candidate, const Document& reference,
    const std::vector<RougeVariant>& variants) {
  std::vector<std::string> ref_tokens = flatten_norms(reference.sentences);
  if (ref_tokens.empty())
    throw DataError("document '" + reference.id +
                    "': reference summary has no tokens");
  return score_token_sequences(flatten_norms(candidate.sentences), ref_tokens,
                               variants);
}

}  // namespace longsum
