// Command-line front end. Subcommands:
//
//   stats    corpus shape statistics for a JSONL dataset
//   extract  run an extractor over a dataset, emit selected sentences
//   score    score candidate summaries against references
//   run      full pipeline over a corpus, emit a report
//   report   compare several reports side by side
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 backend
// error, 4 unexpected internal error.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "longsum/longsum.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

void handle_sigint(int) { g_interrupted.store(true); }

// Writes to the path when given, else to stdout.
void emit(const std::optional<std::string>& out_path,
          const std::string& payload) {
  if (!out_path) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(*out_path);
  if (!out)
    throw longsum::ConfigError("cannot open output file: " + *out_path);
  out << payload;
  if (!payload.empty() && payload.back() != '\n') out << '\n';
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw longsum::DataError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

struct StatsArgs {
  std::string input;
  bool strict = false;
  bool json = false;
};

int cmd_stats(const StatsArgs& args) {
  longsum::JsonlReader reader(args.input, args.strict);
  longsum::DatasetStats stats = longsum::dataset_stats(reader);
  if (args.json) {
    nlohmann::json out = {
        {"num_docs", stats.num_docs},
        {"avg_sentences_per_doc", stats.avg_sentences_per_doc},
        {"avg_tokens_per_doc", stats.avg_tokens_per_doc},
        {"avg_tokens_per_sentence", stats.avg_tokens_per_sentence},
        {"skipped_lines", reader.skipped()},
    };
    std::cout << out.dump(2) << '\n';
  } else {
    std::printf("documents:            %zu\n", stats.num_docs);
    std::printf("avg sentences/doc:    %.2f\n", stats.avg_sentences_per_doc);
    std::printf("avg tokens/doc:       %.2f\n", stats.avg_tokens_per_doc);
    std::printf("avg tokens/sentence:  %.2f\n", stats.avg_tokens_per_sentence);
    if (reader.skipped() > 0)
      std::printf("skipped lines:        %zu\n", reader.skipped());
  }
  return 0;
}

struct ExtractArgs {
  std::string input;
  std::string method = "frequency";
  std::string m_policy = "ratio:0.2";
  std::optional<std::string> stopwords;
  std::optional<std::string> weights;
  double damping = 0.85;
  double epsilon = 1e-6;
  int max_iterations = 100;
  std::optional<std::size_t> limit;
  bool strict = false;
  std::optional<std::string> out;
};

int cmd_extract(const ExtractArgs& args) {
  longsum::Preprocessor method = longsum::parse_preprocessor(args.method);
  if (method == longsum::Preprocessor::none)
    throw longsum::ConfigError("extract needs --method frequency or textrank");
  longsum::MPolicy policy = longsum::MPolicy::parse(args.m_policy);
  longsum::StopwordList stops =
      args.stopwords ? longsum::StopwordList::from_file(*args.stopwords)
                     : longsum::StopwordList::builtin();
  longsum::WordWeights weights;
  if (args.weights) weights = longsum::WordWeights::from_file(*args.weights);
  longsum::RankConfig rank_cfg;
  rank_cfg.damping = args.damping;
  rank_cfg.epsilon = args.epsilon;
  rank_cfg.max_iterations = args.max_iterations;
  rank_cfg.validate();

  longsum::JsonlReader reader(args.input, args.strict);
  std::ostringstream payload;
  std::size_t emitted = 0;
  while (auto record = reader.next()) {
    if (args.limit && emitted >= *args.limit) break;
    ++emitted;
    nlohmann::json line;
    line["id"] = record->article_id;
    try {
      longsum::Document doc = longsum::to_document(*record);
      std::vector<longsum::ScoredSentence> scored;
      if (method == longsum::Preprocessor::frequency) {
        longsum::WordValueTable table =
            longsum::word_values(doc, stops, weights);
        scored = longsum::sentence_values(doc, table);
      } else {
        longsum::SimilarityGraph graph = longsum::build_graph(doc, stops);
        longsum::RankVector ranks = longsum::rank(graph, rank_cfg);
        for (std::size_t i = 0; i < doc.sentences.size(); ++i)
          scored.push_back({i, ranks.scores[i]});
      }
      std::vector<std::size_t> indices = longsum::select_top_indices(
          scored, longsum::resolve_m(policy, doc));
      nlohmann::json sentences = nlohmann::json::array();
      for (std::size_t i : indices)
        sentences.push_back(doc.sentences[i].text);
      line["indices"] = indices;
      line["sentences"] = sentences;
    } catch (const longsum::DataError& e) {
      line["error"] = e.what();
    }
    payload << line.dump() << '\n';
  }
  emit(args.out, payload.str());
  if (reader.skipped() > 0)
    std::cerr << "warning: skipped " << reader.skipped()
              << " malformed dataset lines\n";
  return 0;
}

struct ScoreArgs {
  std::string candidates;
  std::string references;
  std::string variants = "r1,r2,rl";
  bool csv = false;
  std::optional<std::string> out;
};

int cmd_score(const ScoreArgs& args) {
  std::vector<longsum::RougeVariant> variants =
      longsum::parse_variants(args.variants);
  std::vector<std::string> cand_lines = read_lines(args.candidates);
  std::vector<std::string> ref_lines = read_lines(args.references);
  if (cand_lines.size() != ref_lines.size())
    throw longsum::DataError(
        "candidate and reference files differ in line count (" +
        std::to_string(cand_lines.size()) + " vs " +
        std::to_string(ref_lines.size()) + ")");

  auto norms = [](const std::string& text) {
    std::vector<std::string> out;
    for (const longsum::Token& t : longsum::tokenize(text))
      out.push_back(t.norm);
    return out;
  };

  std::map<longsum::RougeVariant, longsum::RougeScore> sums;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < cand_lines.size(); ++i) {
    auto scores = longsum::score_token_sequences(norms(cand_lines[i]),
                                                 norms(ref_lines[i]), variants);
    nlohmann::json row = {{"line", i + 1}};
    for (const auto& [variant, score] : scores) {
      row[variant.str()] = {{"precision", score.precision},
                            {"recall", score.recall},
                            {"f1", score.f1}};
      longsum::RougeScore& sum = sums[variant];
      sum.precision += score.precision;
      sum.recall += score.recall;
      sum.f1 += score.f1;
    }
    rows.push_back(std::move(row));
  }
  const double n = static_cast<double>(cand_lines.size());
  std::map<longsum::RougeVariant, longsum::RougeScore> means;
  for (const auto& [variant, sum] : sums)
    means[variant] = {sum.precision / n, sum.recall / n, sum.f1 / n};

  std::ostringstream payload;
  if (args.csv) {
    payload << "variant,precision,recall,f1\n";
    char buf[128];
    for (const auto& [variant, mean] : means) {
      std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f\n",
                    variant.str().c_str(), mean.precision, mean.recall,
                    mean.f1);
      payload << buf;
    }
  } else {
    nlohmann::json means_json = nlohmann::json::object();
    for (const auto& [variant, mean] : means)
      means_json[variant.str()] = {{"precision", mean.precision},
                                   {"recall", mean.recall},
                                   {"f1", mean.f1}};
    nlohmann::json out = {{"pairs", cand_lines.size()},
                          {"means", means_json},
                          {"lines", rows}};
    payload << out.dump(2) << '\n';
  }
  emit(args.out, payload.str());
  return 0;
}

struct RunArgs {
  std::optional<std::string> config;
  std::optional<std::string> input;
  std::optional<std::string> preprocessor;
  std::optional<std::string> m_policy;
  std::optional<std::string> variants;
  std::optional<std::string> stopwords;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> workers;
  std::optional<std::string> label;
  bool strict = false;
  bool csv = false;
  std::optional<std::string> out;
};

int cmd_run(const RunArgs& args) {
  longsum::PipelineConfig cfg;
  if (args.config) cfg = longsum::PipelineConfig::from_file(*args.config);
  if (args.input) cfg.input = *args.input;
  if (args.preprocessor)
    cfg.preprocessor = longsum::parse_preprocessor(*args.preprocessor);
  if (args.m_policy) cfg.m_policy = longsum::MPolicy::parse(*args.m_policy);
  if (args.variants) cfg.variants = longsum::parse_variants(*args.variants);
  if (args.stopwords) cfg.stopwords_path = *args.stopwords;
  if (args.limit) cfg.limit = *args.limit;
  if (args.workers) cfg.workers = *args.workers;
  if (args.label) cfg.label = *args.label;
  if (args.strict) cfg.strict = true;
  cfg.validate();

  longsum::PipelineRunner runner(std::move(cfg));
  std::signal(SIGINT, handle_sigint);
  longsum::CorpusReport report = runner.run_corpus(&g_interrupted);
  std::signal(SIGINT, SIG_DFL);

  std::ostringstream payload;
  if (args.csv) {
    report.write_csv(payload);
  } else {
    payload << report.to_json().dump(2) << '\n';
  }
  emit(args.out, payload.str());
  for (const std::string& warning : report.warnings)
    std::cerr << "warning: " << warning << '\n';

  // A corpus where every document died in the backend stage is a backend
  // outage, not a successful run.
  if (report.total_documents > 0 && report.scored_documents == 0) {
    bool all_backend = true;
    for (const longsum::PipelineResult& r : report.documents)
      if (!r.error || (r.error->stage != "backend" && r.error->stage != "polish"))
        all_backend = false;
    if (all_backend) return 3;
  }
  return 0;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  bool csv = false;
  std::optional<std::string> out;
};

int cmd_report(const ReportArgs& args) {
  std::vector<longsum::CorpusReport> reports;
  for (const std::string& path : args.inputs)
    reports.push_back(longsum::CorpusReport::from_file(path));
  longsum::ComparisonTable table = longsum::compare_reports(reports);
  std::ostringstream payload;
  if (args.csv) {
    table.write_csv(payload);
  } else {
    payload << table.to_text();
  }
  emit(args.out, payload.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-document summarization toolkit"};
  app.require_subcommand(1);

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Dataset shape statistics");
  stats->add_option("--input", stats_args.input, "JSONL dataset path")
      ->required();
  stats->add_flag("--strict", stats_args.strict,
                  "Abort on the first malformed line");
  stats->add_flag("--json", stats_args.json, "Emit JSON instead of text");

  ExtractArgs extract_args;
  CLI::App* extract =
      app.add_subcommand("extract", "Extract salient sentences per document");
  extract->add_option("--input", extract_args.input, "JSONL dataset path")
      ->required();
  extract->add_option("--method", extract_args.method,
                      "frequency (default) or textrank");
  extract->add_option("--m-policy", extract_args.m_policy,
                      "fixed:K, ref, or ratio:P (default ratio:0.2)");
  extract->add_option("--stopwords", extract_args.stopwords,
                      "Stopword list file (default: built-in English list)");
  extract->add_option("--weights", extract_args.weights,
                      "Word weight overrides, TSV word<TAB>weight");
  extract->add_option("--damping", extract_args.damping,
                      "TextRank damping factor (default 0.85)");
  extract->add_option("--epsilon", extract_args.epsilon,
                      "TextRank convergence threshold (default 1e-6)");
  extract->add_option("--max-iterations", extract_args.max_iterations,
                      "TextRank iteration cap (default 100)");
  extract->add_option("--limit", extract_args.limit,
                      "Process only the first K documents");
  extract->add_flag("--strict", extract_args.strict,
                    "Abort on the first malformed line");
  extract->add_option("--out", extract_args.out,
                      "Output file (default stdout)");

  ScoreArgs score_args;
  CLI::App* score =
      app.add_subcommand("score", "Score candidates against references");
  score
      ->add_option("--candidates", score_args.candidates,
                   "Candidate summaries, one per line")
      ->required();
  score
      ->add_option("--references", score_args.references,
                   "Reference summaries, one per line")
      ->required();
  score->add_option("--variants", score_args.variants,
                    "Comma-separated list (default r1,r2,rl)");
  score->add_flag("--csv", score_args.csv, "Emit mean scores as CSV");
  score->add_option("--out", score_args.out, "Output file (default stdout)");

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Run the full pipeline");
  run->add_option("--config", run_args.config, "Pipeline config JSON file");
  run->add_option("--input", run_args.input, "JSONL dataset path (override)");
  run->add_option("--preprocessor", run_args.preprocessor,
                  "none, frequency or textrank (override)");
  run->add_option("--m-policy", run_args.m_policy,
                  "fixed:K, ref, or ratio:P (override)");
  run->add_option("--variants", run_args.variants,
                  "Comma-separated variant list (override)");
  run->add_option("--stopwords", run_args.stopwords,
                  "Stopword list file (override)");
  run->add_option("--limit", run_args.limit,
                  "Process only the first K documents");
  run->add_option("--workers", run_args.workers,
                  "Concurrent documents (default: processor count)");
  run->add_option("--label", run_args.label, "Report label");
  run->add_flag("--strict", run_args.strict,
                "Abort on the first malformed line");
  run->add_flag("--csv", run_args.csv, "Emit mean scores as CSV");
  run->add_option("--out", run_args.out, "Output file (default stdout)");

  ReportArgs report_args;
  CLI::App* report =
      app.add_subcommand("report", "Compare reports side by side");
  report
      ->add_option("--inputs", report_args.inputs,
                   "Report JSON files to compare")
      ->required()
      ->expected(-1);
  report->add_flag("--csv", report_args.csv, "Emit the table as CSV");
  report->add_option("--out", report_args.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*stats) return cmd_stats(stats_args);
    if (*extract) return cmd_extract(extract_args);
    if (*score) return cmd_score(score_args);
    if (*run) return cmd_run(run_args);
    if (*report) return cmd_report(report_args);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const longsum::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const longsum::BackendError& e) {
    std::cerr << "backend error: " << e.what() << '\n';
    return 3;
  } catch (const longsum::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
}
