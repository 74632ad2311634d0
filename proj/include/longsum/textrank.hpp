#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "longsum/common.hpp"
#include "longsum/frequency.hpp"
#include "longsum/text.hpp"

namespace longsum {

// Weighted undirected sentence-similarity graph. Symmetric by construction;
// no self-loops; only strictly positive weights are stored.
struct SimilarityGraph {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbors;

  explicit SimilarityGraph(std::size_t nodes = 0)
      : n(nodes), neighbors(nodes) {}

  void add_edge(std::size_t i, std::size_t j, double weight) {
    if (i == j) throw ConfigError("similarity graph: self-loops not allowed");
    if (i >= n || j >= n)
      throw ConfigError("similarity graph: node index out of range");
    if (!(weight > 0.0)) return;
    neighbors[i].emplace_back(j, weight);
    neighbors[j].emplace_back(i, weight);
  }

  std::size_t edge_count() const {
    std::size_t half_edges = 0;
    for (const auto& adj : neighbors) half_edges += adj.size();
    return half_edges / 2;
  }

  double weight(std::size_t i, std::size_t j) const {
    for (const auto& [k, w] : neighbors.at(i))
      if (k == j) return w;
    return 0.0;
  }
};

struct RankConfig {
  double damping = 0.85;
  double epsilon = 1e-6;
  int max_iterations = 100;

  void validate() const {
    if (!(damping > 0.0) || !(damping < 1.0))
      throw ConfigError("rank damping must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw ConfigError("rank epsilon must be positive");
    if (max_iterations < 1)
      throw ConfigError("rank max_iterations must be >= 1");
  }
};

struct RankVector {
  std::vector<double> scores;
  bool converged = false;
  int iterations = 0;
};

// Overlap similarity on distinct non-stopword norms:
//   |A intersect B| / (ln|A| + ln|B|),
// zero when either side has <= 1 distinct word (guards the denominator).
inline double sentence_similarity(const Sentence& a, const Sentence& b,
                                  const StopwordList& stops) {
  std::set<std::string> sa, sb;
  for (const Token& t : a.tokens)
    if (!stops.contains(t.norm)) sa.insert(t.norm);
  for (const Token& t : b.tokens)
    if (!stops.contains(t.norm)) sb.insert(t.norm);
  if (sa.size() <= 1 || sb.size() <= 1) return 0.0;
  std::size_t shared = 0;
  for (const std::string& w : sa) shared += sb.count(w);
  if (shared == 0) return 0.0;
  return static_cast<double>(shared) /
         (std::log(static_cast<double>(sa.size())) +
          std::log(static_cast<double>(sb.size())));
}

// Evaluates every sentence pair; edges exist exactly where similarity > 0.
inline SimilarityGraph build_graph(const Document& doc,
                                   const StopwordList& stops) {
  const std::size_t n = doc.sentences.size();
  if (n == 0) throw DataError("document '" + doc.id + "' has no sentences");
  // Distinct non-stopword norms per sentence, sorted for linear-time
  // intersection counting.
  std::vector<std::vector<std::string>> vocab(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::string> distinct;
    for (const Token& t : doc.sentences[i].tokens)
      if (!stops.contains(t.norm)) distinct.insert(t.norm);
    vocab[i].assign(distinct.begin(), distinct.end());
  }
  SimilarityGraph graph(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (vocab[i].size() <= 1) continue;
    const double log_i = std::log(static_cast<double>(vocab[i].size()));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (vocab[j].size() <= 1) continue;
      std::size_t shared = 0;
      auto a = vocab[i].begin();
      auto b = vocab[j].begin();
      while (a != vocab[i].end() && b != vocab[j].end()) {
        if (*a < *b)
          ++a;
        else if (*b < *a)
          ++b;
        else {
          ++shared;
          ++a;
          ++b;
        }
      }
      if (shared == 0) continue;
      double sim = static_cast<double>(shared) /
                   (log_i + std::log(static_cast<double>(vocab[j].size())));
      graph.add_edge(i, j, sim);
    }
  }
  return graph;
}

// Weighted PageRank by synchronous power iteration from uniform scores 1.0:
//   S(i) = (1-d) + d * sum_j w(j,i) / outsum(j) * S(j).
// Weights enter only as normalized ratios, so ranking is invariant under
// uniform weight scaling. Isolated nodes settle at exactly (1-d). Stops when
// the max absolute change drops below epsilon; non-convergence within
// max_iterations is reported through the flag, not as an error.
inline RankVector rank(const SimilarityGraph& graph,
                       const RankConfig& cfg = {}) {
  cfg.validate();
  RankVector result;
  result.scores.assign(graph.n, 1.0);
  if (graph.n == 0) {
    result.converged = true;
    return result;
  }
  std::vector<double> out_sum(graph.n, 0.0);
  for (std::size_t i = 0; i < graph.n; ++i)
    for (const auto& [j, w] : graph.neighbors[i]) out_sum[i] += w;

  const double d = cfg.damping;
  std::vector<double> next(graph.n, 0.0);
  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    double max_delta = 0.0;
    for (std::size_t i = 0; i < graph.n; ++i) {
      double incoming = 0.0;
      for (const auto& [j, w] : graph.neighbors[i])
        incoming += w / out_sum[j] * result.scores[j];
      next[i] = (1.0 - d) + d * incoming;
      max_delta = std::max(max_delta, std::abs(next[i] - result.scores[i]));
    }
    result.scores.swap(next);
    result.iterations = iter;
    if (max_delta < cfg.epsilon) {
      result.converged = true;
      break;
    }
  }
  return result;
}

// Graph-based extraction: rank sentences, then apply the same top-M
// selection contract as the frequency extractor (lowest-index tie-break,
// document-order output).
inline Document textrank_extract(const Document& doc,
                                 const StopwordList& stops,
                                 const RankConfig& cfg,
                                 const MPolicy& policy) {
  SimilarityGraph graph = build_graph(doc, stops);
  RankVector ranks = rank(graph, cfg);
  std::vector<ScoredSentence> scored;
  scored.reserve(doc.sentences.size());
  for (std::size_t i = 0; i < doc.sentences.size(); ++i)
    scored.push_back({i, ranks.scores[i]});
  return select_top_m(scored, resolve_m(policy, doc), doc);
}

}  // namespace longsum
