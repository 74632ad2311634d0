#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "longsum/backend.hpp"
#include "longsum/common.hpp"
#include "longsum/dataset.hpp"
#include "longsum/frequency.hpp"
#include "longsum/rouge.hpp"
#include "longsum/text.hpp"
#include "longsum/textrank.hpp"

namespace longsum {

enum class Preprocessor { none, frequency, textrank };

inline std::string_view to_string(Preprocessor p) {
  switch (p) {
    case Preprocessor::none:
      return "none";
    case Preprocessor::frequency:
      return "frequency";
    case Preprocessor::textrank:
      return "textrank";
  }
  return "none";
}

inline Preprocessor parse_preprocessor(std::string_view text) {
  if (text == "none") return Preprocessor::none;
  if (text == "frequency" || text == "freq") return Preprocessor::frequency;
  if (text == "textrank") return Preprocessor::textrank;
  throw ConfigError("unknown preprocessor '" + std::string(text) +
                    "': expected none, frequency or textrank");
}

// Declarative description of one pipeline run. File representation is JSON
// with the same field names; CLI flags override file values.
struct PipelineConfig {
  Preprocessor preprocessor = Preprocessor::none;
  MPolicy m_policy = MPolicy::ratio(0.2);
  std::vector<RougeVariant> variants = {RougeVariant::ngram(1),
                                        RougeVariant::ngram(2),
                                        RougeVariant::lcs()};
  RankConfig rank;
  BackendSpec backend;
  std::optional<BackendSpec> polisher;
  std::optional<std::size_t> limit;  // first-K documents in file order
  std::size_t workers = 0;           // 0 = processor count
  bool strict = false;
  std::optional<std::filesystem::path> stopwords_path;
  std::optional<std::filesystem::path> word_weights_path;
  std::optional<std::filesystem::path> input;
  std::string label;

  void validate() const {
    if (backend.kind == BackendKind::completion_polisher)
      throw ConfigError("the summarization backend cannot be a "
                        "completion_polisher");
    if (polisher && polisher->kind != BackendKind::completion_polisher)
      throw ConfigError("the polisher must have kind completion_polisher");
    if (variants.empty()) throw ConfigError("variant set must be non-empty");
    rank.validate();
    backend.validate();
    if (polisher) polisher->validate();
  }

  static PipelineConfig from_json(const nlohmann::json& obj);
  static PipelineConfig from_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> known,
                                const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError("unknown config key '" + prefix + key + "'");
  }
}

inline BackendSpec backend_from_json(const nlohmann::json& obj,
                                     const std::string& prefix) {
  if (!obj.is_object())
    throw ConfigError("config section '" + prefix + "' must be an object");
  reject_unknown_keys(
      obj, {"kind", "endpoint", "generation", "limits", "retry", "auth_env"},
      prefix + ".");
  BackendSpec spec;
  if (obj.contains("kind"))
    spec.kind = parse_backend_kind(obj["kind"].get<std::string>());
  if (obj.contains("endpoint"))
    spec.endpoint = obj["endpoint"].get<std::string>();
  if (obj.contains("generation")) {
    const auto& g = obj["generation"];
    reject_unknown_keys(g,
                        {"length_penalty", "num_beams", "max_output_tokens",
                         "engine", "temperature"},
                        prefix + ".generation.");
    if (g.contains("length_penalty"))
      spec.generation.length_penalty = g["length_penalty"].get<double>();
    if (g.contains("num_beams"))
      spec.generation.num_beams = g["num_beams"].get<int>();
    if (g.contains("max_output_tokens"))
      spec.generation.max_output_tokens = g["max_output_tokens"].get<int>();
    if (g.contains("engine"))
      spec.generation.engine = g["engine"].get<std::string>();
    if (g.contains("temperature"))
      spec.generation.temperature = g["temperature"].get<double>();
  }
  if (obj.contains("limits")) {
    const auto& l = obj["limits"];
    reject_unknown_keys(l, {"max_input_tokens"}, prefix + ".limits.");
    if (l.contains("max_input_tokens"))
      spec.limits.max_input_tokens = l["max_input_tokens"].get<int>();
  }
  if (obj.contains("retry")) {
    const auto& r = obj["retry"];
    reject_unknown_keys(
        r, {"max_attempts", "base_backoff_ms", "request_timeout_ms"},
        prefix + ".retry.");
    if (r.contains("max_attempts"))
      spec.retry.max_attempts = r["max_attempts"].get<int>();
    if (r.contains("base_backoff_ms"))
      spec.retry.base_backoff =
          std::chrono::milliseconds(r["base_backoff_ms"].get<long long>());
    if (r.contains("request_timeout_ms"))
      spec.retry.request_timeout =
          std::chrono::milliseconds(r["request_timeout_ms"].get<long long>());
  }
  if (obj.contains("auth_env"))
    spec.auth_env = obj["auth_env"].get<std::string>();
  return spec;
}

inline nlohmann::json backend_to_json(const BackendSpec& spec) {
  nlohmann::json g = {
      {"length_penalty", spec.generation.length_penalty},
      {"num_beams", spec.generation.num_beams},
      {"max_output_tokens", spec.generation.max_output_tokens},
  };
  if (spec.generation.engine) g["engine"] = *spec.generation.engine;
  if (spec.generation.temperature)
    g["temperature"] = *spec.generation.temperature;
  nlohmann::json out = {
      {"kind", std::string(to_string(spec.kind))},
      {"generation", g},
      {"limits", {{"max_input_tokens", spec.limits.max_input_tokens}}},
      {"retry",
       {{"max_attempts", spec.retry.max_attempts},
        {"base_backoff_ms", spec.retry.base_backoff.count()},
        {"request_timeout_ms", spec.retry.request_timeout.count()}}},
  };
  if (!spec.endpoint.empty()) out["endpoint"] = spec.endpoint;
  if (spec.auth_env) out["auth_env"] = *spec.auth_env;
  return out;
}

inline std::string format_double(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace detail

inline PipelineConfig PipelineConfig::from_json(const nlohmann::json& obj) {
  if (!obj.is_object())
    throw ConfigError("pipeline config must be a JSON object");
  detail::reject_unknown_keys(
      obj,
      {"preprocessor", "m_policy", "variants", "rank", "backend", "polisher",
       "limit", "workers", "strict", "stopwords", "word_weights", "input",
       "label"},
      "");
  PipelineConfig cfg;
  if (obj.contains("preprocessor"))
    cfg.preprocessor =
        parse_preprocessor(obj["preprocessor"].get<std::string>());
  if (obj.contains("m_policy"))
    cfg.m_policy = MPolicy::parse(obj["m_policy"].get<std::string>());
  if (obj.contains("variants")) {
    const auto& v = obj["variants"];
    if (v.is_string()) {
      cfg.variants = parse_variants(v.get<std::string>());
    } else if (v.is_array()) {
      cfg.variants.clear();
      for (const auto& item : v)
        cfg.variants.push_back(RougeVariant::parse(item.get<std::string>()));
      std::sort(cfg.variants.begin(), cfg.variants.end());
      cfg.variants.erase(std::unique(cfg.variants.begin(), cfg.variants.end()),
                         cfg.variants.end());
    } else {
      throw ConfigError("config key 'variants' must be a string or array");
    }
  }
  if (obj.contains("rank")) {
    const auto& r = obj["rank"];
    detail::reject_unknown_keys(r, {"damping", "epsilon", "max_iterations"},
                                "rank.");
    if (r.contains("damping")) cfg.rank.damping = r["damping"].get<double>();
    if (r.contains("epsilon")) cfg.rank.epsilon = r["epsilon"].get<double>();
    if (r.contains("max_iterations"))
      cfg.rank.max_iterations = r["max_iterations"].get<int>();
  }
  if (obj.contains("backend"))
    cfg.backend = detail::backend_from_json(obj["backend"], "backend");
  if (obj.contains("polisher"))
    cfg.polisher = detail::backend_from_json(obj["polisher"], "polisher");
  if (obj.contains("limit")) cfg.limit = obj["limit"].get<std::size_t>();
  if (obj.contains("workers")) cfg.workers = obj["workers"].get<std::size_t>();
  if (obj.contains("strict")) cfg.strict = obj["strict"].get<bool>();
  if (obj.contains("stopwords"))
    cfg.stopwords_path = obj["stopwords"].get<std::string>();
  if (obj.contains("word_weights"))
    cfg.word_weights_path = obj["word_weights"].get<std::string>();
  if (obj.contains("input")) cfg.input = obj["input"].get<std::string>();
  if (obj.contains("label")) cfg.label = obj["label"].get<std::string>();
  cfg.validate();
  return cfg;
}

inline PipelineConfig PipelineConfig::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json obj;
  try {
    in >> obj;
  } catch (const std::exception& e) {
    throw ConfigError("config file " + path.string() +
                      " is not valid JSON: " + e.what());
  }
  return from_json(obj);
}

inline nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json variants_json = nlohmann::json::array();
  for (const RougeVariant& v : variants) variants_json.push_back(v.str());
  nlohmann::json out = {
      {"preprocessor", std::string(to_string(preprocessor))},
      {"m_policy", m_policy.str()},
      {"variants", variants_json},
      {"rank",
       {{"damping", rank.damping},
        {"epsilon", rank.epsilon},
        {"max_iterations", rank.max_iterations}}},
      {"backend", detail::backend_to_json(backend)},
      {"workers", workers},
      {"strict", strict},
  };
  if (polisher) out["polisher"] = detail::backend_to_json(*polisher);
  if (limit) out["limit"] = *limit;
  if (stopwords_path) out["stopwords"] = stopwords_path->string();
  if (word_weights_path) out["word_weights"] = word_weights_path->string();
  if (input) out["input"] = input->string();
  if (!label.empty()) out["label"] = label;
  return out;
}

struct StageError {
  std::string stage;  // load | extract | truncate | backend | polish | score
  std::string message;
};

// Everything produced for one document. Exactly one of scores/error is
// populated; intermediate artifacts are retained for inspection.
struct PipelineResult {
  std::string id;
  std::vector<std::size_t> extracted_indices;
  std::string summary;
  std::optional<std::string> polished;
  bool polish_fell_back = false;
  std::map<RougeVariant, RougeScore> scores;
  std::map<std::string, double> timings_ms;  // per stage, plus "total"
  std::optional<StageError> error;

  bool scored() const { return !error && !scores.empty(); }

  nlohmann::json to_json(bool include_timings = true) const {
    nlohmann::json out = {
        {"id", id},
        {"extracted_indices", extracted_indices},
        {"summary", summary},
    };
    if (polished) {
      out["polished"] = *polished;
      out["polish_fell_back"] = polish_fell_back;
    }
    if (!scores.empty()) {
      nlohmann::json s = nlohmann::json::object();
      for (const auto& [variant, score] : scores)
        s[variant.str()] = {{"precision", score.precision},
                            {"recall", score.recall},
                            {"f1", score.f1}};
      out["scores"] = s;
    }
    if (error)
      out["error"] = {{"stage", error->stage}, {"message", error->message}};
    if (include_timings) {
      nlohmann::json t = nlohmann::json::object();
      for (const auto& [stage, ms] : timings_ms) t[stage] = ms;
      out["timings_ms"] = t;
    }
    return out;
  }
};

// Corpus-level aggregate: unweighted arithmetic means over successfully
// scored documents, failure tallies and the config fingerprint.
struct CorpusReport {
  std::string label;
  std::string fingerprint;
  std::string stopword_hash;
  nlohmann::json config_echo;
  std::vector<PipelineResult> documents;
  std::map<RougeVariant, RougeScore> means;
  std::size_t total_documents = 0;
  std::size_t scored_documents = 0;
  std::size_t failed_documents = 0;
  std::size_t skipped_lines = 0;
  bool incomplete = false;
  std::vector<std::string> warnings;

  std::vector<RougeVariant> variant_set() const {
    std::vector<RougeVariant> out;
    for (const auto& [variant, mean] : means) out.push_back(variant);
    return out;
  }

  nlohmann::json to_json(bool include_timings = true) const {
    nlohmann::json means_json = nlohmann::json::object();
    for (const auto& [variant, score] : means)
      means_json[variant.str()] = {{"precision", score.precision},
                                   {"recall", score.recall},
                                   {"f1", score.f1}};
    nlohmann::json docs = nlohmann::json::array();
    for (const PipelineResult& r : documents)
      docs.push_back(r.to_json(include_timings));
    return nlohmann::json{
        {"report_version", 1},
        {"label", label},
        {"fingerprint", fingerprint},
        {"stopword_hash", stopword_hash},
        {"config", config_echo},
        {"summary",
         {{"total_documents", total_documents},
          {"scored_documents", scored_documents},
          {"failed_documents", failed_documents},
          {"skipped_lines", skipped_lines},
          {"incomplete", incomplete},
          {"means", means_json}}},
        {"warnings", warnings},
        {"documents", docs},
    };
  }

  // Reads back the fields needed for comparison; per-document detail is
  // not reconstructed.
  static CorpusReport from_json(const nlohmann::json& obj) {
    CorpusReport report;
    if (!obj.is_object() || !obj.contains("summary"))
      throw DataError("not a corpus report: missing 'summary'");
    if (obj.contains("label")) report.label = obj["label"].get<std::string>();
    if (obj.contains("fingerprint"))
      report.fingerprint = obj["fingerprint"].get<std::string>();
    if (obj.contains("stopword_hash"))
      report.stopword_hash = obj["stopword_hash"].get<std::string>();
    if (obj.contains("config")) report.config_echo = obj["config"];
    const auto& summary = obj["summary"];
    if (summary.contains("total_documents"))
      report.total_documents = summary["total_documents"].get<std::size_t>();
    if (summary.contains("scored_documents"))
      report.scored_documents = summary["scored_documents"].get<std::size_t>();
    if (summary.contains("failed_documents"))
      report.failed_documents = summary["failed_documents"].get<std::size_t>();
    if (summary.contains("skipped_lines"))
      report.skipped_lines = summary["skipped_lines"].get<std::size_t>();
    if (summary.contains("incomplete"))
      report.incomplete = summary["incomplete"].get<bool>();
    if (!summary.contains("means") || !summary["means"].is_object())
      throw DataError("not a corpus report: missing 'summary.means'");
    for (const auto& [key, value] : summary["means"].items()) {
      RougeScore score;
      score.precision = value.at("precision").get<double>();
      score.recall = value.at("recall").get<double>();
      score.f1 = value.at("f1").get<double>();
      report.means[RougeVariant::parse(key)] = score;
    }
    return report;
  }

  static CorpusReport from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open report file: " + path.string());
    nlohmann::json obj;
    try {
      in >> obj;
    } catch (const std::exception& e) {
      throw DataError("report file " + path.string() +
                      " is not valid JSON: " + e.what());
    }
    return from_json(obj);
  }

  // One row per variant: mean precision, recall, F1.
  void write_csv(std::ostream& out) const {
    out << "variant,precision,recall,f1\n";
    for (const auto& [variant, score] : means)
      out << variant.str() << ',' << detail::format_double(score.precision, 6)
          << ',' << detail::format_double(score.recall, 6) << ','
          << detail::format_double(score.f1, 6) << '\n';
  }
};

namespace detail {

class StageTimer {
 public:
  StageTimer(std::map<std::string, double>& sink, std::string stage)
      : sink_(sink),
        stage_(std::move(stage)),
        start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    sink_[stage_] =
        std::chrono::duration<double, std::milli>(elapsed).count();
  }

 private:
  std::map<std::string, double>& sink_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// Composes the stages end to end over single documents and corpora.
// All state is immutable after construction; safe to share across threads.
class PipelineRunner {
 public:
  explicit PipelineRunner(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    if (cfg_.stopwords_path) {
      stops_ = StopwordList::from_file(*cfg_.stopwords_path);
      stopword_source_ = cfg_.stopwords_path->string();
    } else {
      stops_ = StopwordList::builtin();
      stopword_source_ = "builtin";
    }
    if (cfg_.word_weights_path)
      weights_ = WordWeights::from_file(*cfg_.word_weights_path);
    fingerprint_ = compute_fingerprint();
  }

  const PipelineConfig& config() const { return cfg_; }
  const StopwordList& stopwords() const { return stops_; }
  const std::string& fingerprint() const { return fingerprint_; }

  PipelineResult run_document(const Document& doc) const {
    PipelineResult result;
    result.id = doc.id;
    const auto total_start = std::chrono::steady_clock::now();
    std::string stage = "extract";
    try {
      Document working = doc;
      {
        detail::StageTimer timer(result.timings_ms, "extract");
        auto [indices, extracted] = preprocess(doc);
        result.extracted_indices = std::move(indices);
        working = std::move(extracted);
      }
      stage = "truncate";
      {
        detail::StageTimer timer(result.timings_ms, "truncate");
        working = truncate_to_limit(working, cfg_.backend.limits);
      }
      stage = "backend";
      {
        detail::StageTimer timer(result.timings_ms, "backend");
        result.summary = BackendClient(cfg_.backend).summarize(working);
      }
      if (cfg_.polisher) {
        stage = "polish";
        detail::StageTimer timer(result.timings_ms, "polish");
        PolishResult polished =
            BackendClient(*cfg_.polisher).polish(result.summary, doc.id);
        result.polished = std::move(polished.text);
        result.polish_fell_back = polished.fell_back;
      }
      stage = "score";
      {
        detail::StageTimer timer(result.timings_ms, "score");
        if (!doc.has_reference())
          throw DataError("reference absent; document excluded from scoring");
        const std::string& final_text =
            result.polished ? *result.polished : result.summary;
        std::vector<std::string> candidate;
        for (const Token& t : tokenize(final_text))
          candidate.push_back(t.norm);
        result.scores = score_token_sequences(
            candidate, flatten_norms(*doc.reference), cfg_.variants);
      }
    } catch (const std::exception& e) {
      result.scores.clear();
      result.error = StageError{stage, e.what()};
    }
    const auto total = std::chrono::steady_clock::now() - total_start;
    result.timings_ms["total"] =
        std::chrono::duration<double, std::milli>(total).count();
    return result;
  }

  // Streams the dataset, fans documents out to a bounded worker pool and
  // aggregates in file order. Per-document failures are tallied;
  // dataset-level I/O failures abort. A set cancel flag stops dispatch
  // after the in-flight chunk and marks the report incomplete.
  CorpusReport run_corpus(const std::filesystem::path& dataset,
                          const std::atomic<bool>* cancel = nullptr) const {
    JsonlReader reader(dataset, cfg_.strict);
    CorpusReport report;
    report.label = cfg_.label.empty() ? dataset.stem().string() : cfg_.label;
    report.fingerprint = fingerprint_;
    report.stopword_hash = stops_.content_hash_hex();
    report.config_echo = config_echo();

    const std::size_t workers =
        cfg_.workers > 0
            ? cfg_.workers
            : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::size_t admitted = 0;
    bool cancelled = false;
    bool exhausted = false;
    while (!exhausted && !cancelled) {
      // One chunk per worker; load failures become ready-made results.
      std::vector<std::optional<Document>> docs;
      std::vector<PipelineResult> results;
      while (docs.size() < workers) {
        if (cancel && cancel->load()) {
          cancelled = true;
          break;
        }
        if (cfg_.limit && admitted >= *cfg_.limit) {
          exhausted = true;
          break;
        }
        auto record = reader.next();
        if (!record) {
          exhausted = true;
          break;
        }
        ++admitted;
        PipelineResult placeholder;
        try {
          docs.emplace_back(to_document(*record));
          placeholder.id = record->article_id;
        } catch (const std::exception& e) {
          docs.emplace_back(std::nullopt);
          placeholder.id = record->article_id;
          placeholder.error = StageError{"load", e.what()};
        }
        results.push_back(std::move(placeholder));
      }
      if (docs.empty()) break;
      {
        std::vector<std::thread> pool;
        pool.reserve(docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i) {
          if (!docs[i]) continue;
          pool.emplace_back([this, &docs, &results, i] {
            results[i] = run_document(*docs[i]);
          });
        }
        for (std::thread& t : pool) t.join();
      }
      for (PipelineResult& r : results)
        report.documents.push_back(std::move(r));
    }
    report.incomplete = cancelled;
    report.skipped_lines = reader.skipped();
    aggregate(report);
    return report;
  }

  CorpusReport run_corpus(const std::atomic<bool>* cancel = nullptr) const {
    if (!cfg_.input)
      throw ConfigError("no input dataset configured (set 'input' in the "
                        "config file or pass --input)");
    return run_corpus(*cfg_.input, cancel);
  }

 private:
  std::pair<std::vector<std::size_t>, Document> preprocess(
      const Document& doc) const {
    switch (cfg_.preprocessor) {
      case Preprocessor::none: {
        std::vector<std::size_t> all(doc.sentences.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return {std::move(all), doc};
      }
      case Preprocessor::frequency: {
        WordValueTable table = word_values(doc, stops_, weights_);
        std::vector<ScoredSentence> scored = sentence_values(doc, table);
        std::vector<std::size_t> indices =
            select_top_indices(scored, resolve_m(cfg_.m_policy, doc));
        return {indices, subdocument(doc, indices)};
      }
      case Preprocessor::textrank: {
        SimilarityGraph graph = build_graph(doc, stops_);
        RankVector ranks = rank(graph, cfg_.rank);
        std::vector<ScoredSentence> scored;
        scored.reserve(doc.sentences.size());
        for (std::size_t i = 0; i < doc.sentences.size(); ++i)
          scored.push_back({i, ranks.scores[i]});
        std::vector<std::size_t> indices =
            select_top_indices(scored, resolve_m(cfg_.m_policy, doc));
        return {indices, subdocument(doc, indices)};
      }
    }
    throw ConfigError("unreachable preprocessor kind");
  }

  void aggregate(CorpusReport& report) const {
    report.total_documents = report.documents.size();
    std::map<RougeVariant, RougeScore> sums;
    for (const RougeVariant& v : cfg_.variants) sums[v] = RougeScore{};
    for (const PipelineResult& r : report.documents) {
      if (!r.scored()) continue;
      ++report.scored_documents;
      for (const auto& [variant, score] : r.scores) {
        RougeScore& sum = sums[variant];
        sum.precision += score.precision;
        sum.recall += score.recall;
        sum.f1 += score.f1;
      }
    }
    report.failed_documents =
        report.total_documents - report.scored_documents;
    for (auto& [variant, sum] : sums) {
      RougeScore mean;
      if (report.scored_documents > 0) {
        const double n = static_cast<double>(report.scored_documents);
        mean.precision = sum.precision / n;
        mean.recall = sum.recall / n;
        mean.f1 = sum.f1 / n;
      }
      report.means[variant] = mean;
    }
    if (report.total_documents > 0 && report.scored_documents == 0)
      report.warnings.push_back(
          "no documents were scored (" +
          std::to_string(report.failed_documents) +
          " failed or lacked references); means are all zero");
    if (report.skipped_lines > 0)
      report.warnings.push_back(std::to_string(report.skipped_lines) +
                                " malformed dataset lines were skipped");
    if (report.incomplete)
      report.warnings.push_back(
          "run was cancelled before the corpus was exhausted; report is "
          "partial");
  }

  nlohmann::json config_echo() const {
    nlohmann::json echo = cfg_.to_json();
    echo["stopwords"] = stopword_source_;
    echo["stopword_hash"] = stops_.content_hash_hex();
    return echo;
  }

  // Hash of everything that can change scores: preprocessor, policy,
  // variants, rank settings, backend/polisher specs (minus retry timing and
  // secrets), the stopword list and any weight overrides.
  std::string compute_fingerprint() const {
    nlohmann::json subset = cfg_.to_json();
    subset.erase("workers");
    if (subset.contains("input")) subset.erase("input");
    if (subset.contains("label")) subset.erase("label");
    if (subset.contains("backend")) subset["backend"].erase("retry");
    if (subset.contains("polisher")) subset["polisher"].erase("retry");
    subset["stopword_hash"] = stops_.content_hash_hex();
    if (!weights_.overrides.empty()) {
      std::vector<std::string> entries;
      entries.reserve(weights_.overrides.size());
      for (const auto& [word, value] : weights_.overrides)
        entries.push_back(word + "=" + detail::format_double(value, 9));
      std::sort(entries.begin(), entries.end());
      nlohmann::json weights_json = entries;
      subset["word_weight_overrides"] = weights_json;
    }
    return hex64(fnv1a64(subset.dump()));
  }

  PipelineConfig cfg_;
  StopwordList stops_;
  WordWeights weights_;
  std::string stopword_source_;
  std::string fingerprint_;
};

inline PipelineResult run_document(const Document& doc,
                                   const PipelineConfig& cfg) {
  return PipelineRunner(cfg).run_document(doc);
}

inline CorpusReport run_corpus(const std::filesystem::path& dataset,
                               const PipelineConfig& cfg) {
  return PipelineRunner(cfg).run_corpus(dataset);
}

struct ComparisonRow {
  std::string label;
  std::size_t documents = 0;
  std::vector<double> f1;    // aligned with ComparisonTable::variants
  std::vector<bool> best;    // flag for the best value per column
};

// Rows = configurations, columns = per-variant F1 means.
struct ComparisonTable {
  std::vector<RougeVariant> variants;
  std::vector<ComparisonRow> rows;

  std::string to_text() const {
    std::size_t label_width = std::string("configuration").size();
    for (const ComparisonRow& row : rows)
      label_width = std::max(label_width, row.label.size());
    std::string out = "configuration";
    out.append(label_width - std::string("configuration").size(), ' ');
    out += "  docs";
    for (const RougeVariant& v : variants) {
      std::string head = v.str() + "-f1";
      out += "  ";
      out.append(head.size() < 9 ? 9 - head.size() : 0, ' ');
      out += head;
    }
    out += '\n';
    for (const ComparisonRow& row : rows) {
      out += row.label;
      out.append(label_width - row.label.size(), ' ');
      char docs[16];
      std::snprintf(docs, sizeof(docs), "%6zu", row.documents);
      out += docs;
      for (std::size_t c = 0; c < row.f1.size(); ++c) {
        std::string cell = detail::format_double(row.f1[c], 4);
        if (row.best[c]) cell += '*';
        out += "  ";
        out.append(cell.size() < 9 ? 9 - cell.size() : 0, ' ');
        out += cell;
      }
      out += '\n';
    }
    return out;
  }

  void write_csv(std::ostream& out) const {
    out << "label,documents";
    for (const RougeVariant& v : variants) out << ',' << v.str() << "_f1";
    out << '\n';
    for (const ComparisonRow& row : rows) {
      out << row.label << ',' << row.documents;
      for (double value : row.f1)
        out << ',' << detail::format_double(value, 6);
      out << '\n';
    }
  }
};

// All reports must carry the same variant set; the best value per column is
// flagged (ties share the flag).
inline ComparisonTable compare_reports(
    const std::vector<CorpusReport>& reports) {
  if (reports.empty())
    throw ConfigError("compare_reports requires at least one report");
  ComparisonTable table;
  table.variants = reports.front().variant_set();
  for (const CorpusReport& report : reports)
    if (report.variant_set() != table.variants)
      throw ConfigError("reports carry mismatched variant sets ('" +
                        report.label + "' differs from '" +
                        reports.front().label + "')");
  for (const CorpusReport& report : reports) {
    ComparisonRow row;
    row.label = report.label;
    row.documents = report.scored_documents;
    for (const RougeVariant& v : table.variants)
      row.f1.push_back(report.means.at(v).f1);
    row.best.assign(table.variants.size(), false);
    table.rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < table.variants.size(); ++c) {
    double best = table.rows.front().f1[c];
    for (const ComparisonRow& row : table.rows)
      best = std::max(best, row.f1[c]);
    for (ComparisonRow& row : table.rows)
      row.best[c] = row.f1[c] == best;
  }
  return table;
}

}  // namespace longsum
