// Acceptance gate for the toolkit. Each criterion prints exactly one line:
//
//   [PASS] <criterion>
//   [FAIL] <criterion>: <detail>
//   [SKIP] <criterion>: <reason>
//
// Criteria that need the public arXiv/PubMed scientific-papers datasets are
// skipped (honestly, with the probed location) when the files are absent.
// Datasets are looked up under $LONGSUM_DATA_DIR, default ./data.
// The process exits non-zero iff any criterion fails.

#include <array>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "longsum/longsum.hpp"
#include "support/mock_backend.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace longsum;

namespace {

const std::string kFixtures = LONGSUM_FIXTURE_DIR;

struct Outcome {
  enum class Status { pass, fail, skip } status;
  std::string detail;
};

Outcome pass() { return {Outcome::Status::pass, ""}; }
Outcome fail(std::string detail) {
  return {Outcome::Status::fail, std::move(detail)};
}
Outcome skip(std::string reason) {
  return {Outcome::Status::skip, std::move(reason)};
}

// --- pinned expectations -------------------------------------------------

// Mean F1 x100 on the first 100 test documents, reference-length M,
// identity backend. Tolerance is deliberately wide: tokenization details
// legitimately move extractive scores by a point or two.
constexpr double kScoreTolerance = 3.0;
constexpr std::array<double, 3> kFreqArxiv = {27.05, 7.94, 13.87};
constexpr std::array<double, 3> kFreqPubmed = {34.65, 12.40, 19.66};
constexpr std::array<double, 3> kRankArxiv = {29.49, 9.58, 14.86};
constexpr std::array<double, 3> kRankPubmed = {31.34, 12.25, 17.35};

// Corpus shape: sentences/doc, tokens/doc, tokens/sentence, within 10%.
constexpr double kStatsTolerance = 0.10;
constexpr std::array<double, 3> kArxivShape = {206.0, 6029.0, 29.0};
constexpr std::array<double, 3> kPubmedShape = {86.0, 3048.0, 33.0};

// Bundled fixture, hand-counted: 3 docs, 9 sentences, 51 tokens.
constexpr double kExactEps = 1e-9;

// -------------------------------------------------------------------------

fs::path data_root() {
  const char* env = std::getenv("LONGSUM_DATA_DIR");
  return (env != nullptr && *env != '\0') ? fs::path(env) : fs::path("./data");
}

std::optional<fs::path> find_dataset(const std::string& stem) {
  const fs::path root = data_root();
  const fs::path candidates[] = {
      root / (stem + "-dataset") / "test.txt",
      root / (stem + "-release") / "test.txt",
      root / stem / "test.txt",
      root / stem / "test.jsonl",
      root / (stem + "_test.jsonl"),
  };
  for (const fs::path& p : candidates) {
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p;
  }
  return std::nullopt;
}

std::string missing_note(const std::string& stem) {
  return stem + " test split not found under " + data_root().string();
}

std::array<double, 3> mean_f1_x100(const fs::path& dataset,
                                   Preprocessor preprocessor) {
  PipelineConfig cfg;
  cfg.preprocessor = preprocessor;
  cfg.m_policy = MPolicy::reference_length();
  cfg.limit = 100;
  CorpusReport report = PipelineRunner(cfg).run_corpus(dataset);
  if (report.scored_documents == 0)
    throw DataError("no documents scored from " + dataset.string());
  return {report.means.at(RougeVariant::ngram(1)).f1 * 100.0,
          report.means.at(RougeVariant::ngram(2)).f1 * 100.0,
          report.means.at(RougeVariant::lcs()).f1 * 100.0};
}

std::string format_triple(const std::array<double, 3>& v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.2f/%.2f/%.2f", v[0], v[1], v[2]);
  return buf;
}

Outcome check_reproduction(Preprocessor preprocessor,
                           const std::array<double, 3>& arxiv_target,
                           const std::array<double, 3>& pubmed_target) {
  auto arxiv = find_dataset("arxiv");
  auto pubmed = find_dataset("pubmed");
  if (!arxiv && !pubmed)
    return skip(missing_note("arxiv") + "; " + missing_note("pubmed"));
  std::string detail;
  auto check_one = [&](const fs::path& path,
                       const std::array<double, 3>& target,
                       const char* name) {
    std::array<double, 3> got = mean_f1_x100(path, preprocessor);
    for (std::size_t i = 0; i < 3; ++i) {
      if (std::abs(got[i] - target[i]) > kScoreTolerance) {
        if (!detail.empty()) detail += "; ";
        detail += std::string(name) + " got " + format_triple(got) +
                  ", want " + format_triple(target) + " +/-" +
                  std::to_string(kScoreTolerance);
        return;
      }
    }
  };
  if (arxiv) check_one(*arxiv, arxiv_target, "arxiv");
  if (pubmed) check_one(*pubmed, pubmed_target, "pubmed");
  if (!detail.empty()) return fail(detail);
  if (!arxiv) return skip("passed on pubmed; " + missing_note("arxiv"));
  if (!pubmed) return skip("passed on arxiv; " + missing_note("pubmed"));
  return pass();
}

Outcome criterion_freq_reproduction() {
  return check_reproduction(Preprocessor::frequency, kFreqArxiv, kFreqPubmed);
}

Outcome criterion_textrank_reproduction() {
  return check_reproduction(Preprocessor::textrank, kRankArxiv, kRankPubmed);
}

Outcome criterion_corpus_shape() {
  auto arxiv = find_dataset("arxiv");
  auto pubmed = find_dataset("pubmed");
  if (!arxiv && !pubmed)
    return skip(missing_note("arxiv") + "; " + missing_note("pubmed"));
  std::string detail;
  auto check_one = [&](const fs::path& path,
                       const std::array<double, 3>& shape, const char* name) {
    JsonlReader reader(path);
    DatasetStats stats = dataset_stats(reader);
    const std::array<double, 3> got = {stats.avg_sentences_per_doc,
                                       stats.avg_tokens_per_doc,
                                       stats.avg_tokens_per_sentence};
    for (std::size_t i = 0; i < 3; ++i) {
      if (std::abs(got[i] - shape[i]) > kStatsTolerance * shape[i]) {
        if (!detail.empty()) detail += "; ";
        detail += std::string(name) + " got " + format_triple(got) +
                  ", want " + format_triple(shape) + " +/-10%";
        return;
      }
    }
  };
  if (arxiv) check_one(*arxiv, kArxivShape, "arxiv");
  if (pubmed) check_one(*pubmed, kPubmedShape, "pubmed");
  if (!detail.empty()) return fail(detail);
  if (!arxiv) return skip("passed on pubmed; " + missing_note("arxiv"));
  if (!pubmed) return skip("passed on arxiv; " + missing_note("pubmed"));
  return pass();
}

Outcome criterion_fixture_stats() {
  JsonlReader reader(kFixtures + "/tiny.jsonl");
  DatasetStats stats = dataset_stats(reader);
  if (stats.num_docs != 3) return fail("expected 3 documents");
  if (std::abs(stats.avg_sentences_per_doc - 3.0) > kExactEps)
    return fail("sentences/doc: got " +
                std::to_string(stats.avg_sentences_per_doc) + ", want 3");
  if (std::abs(stats.avg_tokens_per_doc - 17.0) > kExactEps)
    return fail("tokens/doc: got " +
                std::to_string(stats.avg_tokens_per_doc) + ", want 17");
  if (std::abs(stats.avg_tokens_per_sentence - 51.0 / 9.0) > kExactEps)
    return fail("tokens/sentence: got " +
                std::to_string(stats.avg_tokens_per_sentence) +
                ", want 51/9");
  return pass();
}

Outcome criterion_rouge_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 1000; ++trial) {
    auto cand = oracle::random_tokens(rng, 40, 8);
    auto ref = oracle::random_tokens(rng, 40, 8);
    for (int n : {1, 2, 3}) {
      oracle::NgramOverlap counts = oracle::ngram_overlap(cand, ref, n);
      RougeScore want = RougeScore::from_counts(
          static_cast<double>(counts.overlap),
          static_cast<double>(counts.candidate_total),
          static_cast<double>(counts.reference_total));
      RougeScore got = rouge_n(cand, ref, n);
      if (std::abs(got.precision - want.precision) > 1e-12 ||
          std::abs(got.recall - want.recall) > 1e-12 ||
          std::abs(got.f1 - want.f1) > 1e-12)
        return fail("n-gram mismatch at trial " + std::to_string(trial) +
                    ", n=" + std::to_string(n));
    }
  }
  for (int trial = 0; trial < 300; ++trial) {
    auto a = oracle::random_tokens(rng, 12, 4);
    auto b = oracle::random_tokens(rng, 12, 4);
    if (lcs_length(a, b) != oracle::lcs_length(a, b))
      return fail("lcs mismatch at trial " + std::to_string(trial));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (seconds > 30.0)
    return fail("took " + std::to_string(seconds) + "s, budget 30s");
  return pass();
}

Outcome criterion_rank_numerics() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(424242);
  int converged = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SimilarityGraph graph = oracle::random_graph(rng, 12);
    RankVector result = rank(graph);
    if (!result.converged) continue;
    ++converged;
    std::vector<double> expected = oracle::stationary_scores(graph, 0.85);
    for (std::size_t i = 0; i < graph.n; ++i)
      if (std::abs(result.scores[i] - expected[i]) > 2e-4)
        return fail("trial " + std::to_string(trial) + " node " +
                    std::to_string(i) + ": got " +
                    std::to_string(result.scores[i]) + ", want " +
                    std::to_string(expected[i]));
  }
  if (converged < 150)
    return fail("only " + std::to_string(converged) +
                "/200 graphs converged within the iteration cap");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (seconds > 10.0)
    return fail("took " + std::to_string(seconds) + "s, budget 10s");
  return pass();
}

Outcome criterion_determinism() {
  PipelineConfig cfg;
  cfg.preprocessor = Preprocessor::frequency;
  cfg.m_policy = MPolicy::reference_length();
  cfg.workers = 4;
  PipelineRunner runner(cfg);
  const fs::path dataset = kFixtures + "/tiny.jsonl";
  CorpusReport first = runner.run_corpus(dataset);
  CorpusReport second = runner.run_corpus(dataset);
  if (first.to_json(false).dump() != second.to_json(false).dump())
    return fail("parallel runs differ outside timing fields");
  if (first.fingerprint != second.fingerprint)
    return fail("fingerprint not stable");

  // Identity backend invariant: with no sentence selection, the summary is
  // exactly the document text joined with spaces.
  PipelineConfig passthrough;
  passthrough.m_policy = MPolicy::fixed(1000);
  CorpusReport echo = PipelineRunner(passthrough).run_corpus(dataset);
  JsonlReader reader(dataset);
  std::size_t i = 0;
  while (auto record = reader.next()) {
    Document doc = to_document(*record);
    if (echo.documents.at(i).summary != join_sentences(doc.sentences))
      return fail("identity summary differs from source text for " + doc.id);
    ++i;
  }
  return pass();
}

Outcome criterion_backend_contract() {
  testsupport::MockBackend mock;

  // Summarizer wire schema, with the default generation parameters.
  BackendSpec spec;
  spec.kind = BackendKind::http_summarizer;
  spec.endpoint = mock.summarize_url();
  spec.retry.max_attempts = 3;
  spec.retry.base_backoff = std::chrono::milliseconds(5);
  mock.set_summary("wire ok");
  if (summarize(spec, make_document("a-1", {"some text ."})) != "wire ok")
    return fail("summary not returned verbatim");
  nlohmann::json req = mock.last_summarize_request();
  if (req.size() != 3 || req["id"] != "a-1" || !req.contains("text") ||
      req["params"].size() != 3 || req["params"]["length_penalty"] != 0.8 ||
      req["params"]["num_beams"] != 5 ||
      req["params"]["max_output_tokens"] != 256)
    return fail("summarizer request deviates from the wire schema: " +
                req.dump());

  // Retry budget: two injected 500s then success -> exactly 3 calls.
  mock.fail_next(2, 500);
  summarize(spec, make_document("a-2", {"text ."}));
  if (mock.summarize_calls() != 4)  // 1 earlier + 3 now
    return fail("expected 3 attempts after two 500s, saw " +
                std::to_string(mock.summarize_calls() - 1));

  // Non-retryable status: exactly one call.
  mock.always_fail(404);
  int before = mock.summarize_calls();
  try {
    summarize(spec, make_document("a-3", {"text ."}));
    return fail("404 did not raise");
  } catch (const BackendError& e) {
    if (e.attempts() != 1) return fail("404 was retried");
  }
  if (mock.summarize_calls() != before + 1)
    return fail("404 produced extra requests");
  mock.always_fail(0);

  // Completion protocol: prompt template, curie default, no temperature.
  BackendSpec polisher;
  polisher.kind = BackendKind::completion_polisher;
  polisher.endpoint = mock.complete_url();
  polisher.retry.base_backoff = std::chrono::milliseconds(5);
  mock.set_completion("shinier text");
  PolishResult polished = polish(polisher, "dull text");
  if (polished.text != "shinier text" || polished.fell_back)
    return fail("completion not applied");
  nlohmann::json creq = mock.last_complete_request();
  if (creq["prompt"] != "Original dull text, Polished Sentence:")
    return fail("prompt template deviates: " + creq["prompt"].dump());
  if (creq["engine"] != "curie" || creq.contains("temperature") ||
      creq["max_tokens"] != 256)
    return fail("completion request deviates: " + creq.dump());

  // Empty completion falls back to the input, flagged.
  mock.set_completion("   ");
  PolishResult fallback = polish(polisher, "keep this");
  if (!fallback.fell_back || fallback.text != "keep this")
    return fail("empty completion did not fall back");

  // Bearer auth: token from the named env var, sent as a header only;
  // a missing variable fails before any request leaves the process.
  mock.set_completion("authed");
  mock.require_token("tok-123");
  polisher.auth_env = "LONGSUM_ACCEPT_TOKEN";
  ::setenv("LONGSUM_ACCEPT_TOKEN", "tok-123", 1);
  PolishResult authed = polish(polisher, "text");
  if (authed.text != "authed") return fail("bearer auth did not succeed");
  if (mock.last_auth_header() != "Bearer tok-123")
    return fail("authorization header malformed");
  if (mock.last_complete_request().dump().find("tok-123") !=
      std::string::npos)
    return fail("token leaked into the request body");
  ::unsetenv("LONGSUM_ACCEPT_TOKEN");
  int calls = mock.complete_calls();
  try {
    polish(polisher, "text");
    return fail("missing token env var did not raise");
  } catch (const BackendError&) {
  }
  if (mock.complete_calls() != calls)
    return fail("request went out despite missing token");
  return pass();
}

struct Criterion {
  const char* name;
  Outcome (*check)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"frequency extraction reproduces the pinned arxiv/pubmed baselines",
       criterion_freq_reproduction},
      {"textrank extraction reproduces the pinned arxiv/pubmed baselines",
       criterion_textrank_reproduction},
      {"corpus shape statistics match the pinned dataset profile (+/-10%)",
       criterion_corpus_shape},
      {"dataset statistics are exact on the bundled fixture",
       criterion_fixture_stats},
      {"rouge agrees with the brute-force oracle on 1000 random pairs",
       criterion_rouge_oracle},
      {"rank scores satisfy the dense stationary solve on 200 random graphs",
       criterion_rank_numerics},
      {"parallel corpus runs are deterministic modulo timings",
       criterion_determinism},
      {"backend clients honor the wire contract against a mock server",
       criterion_backend_contract},
  };

  int failures = 0;
  int skips = 0;
  for (const Criterion& c : criteria) {
    Outcome outcome{Outcome::Status::fail, "unknown"};
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = fail(std::string("unexpected exception: ") + e.what());
    }
    switch (outcome.status) {
      case Outcome::Status::pass:
        std::printf("[PASS] %s\n", c.name);
        break;
      case Outcome::Status::fail:
        ++failures;
        std::printf("[FAIL] %s: %s\n", c.name, outcome.detail.c_str());
        break;
      case Outcome::Status::skip:
        ++skips;
        std::printf("[SKIP] %s: %s\n", c.name, outcome.detail.c_str());
        break;
    }
  }
  std::printf("%d passed, %d failed, %d skipped\n",
              static_cast<int>(std::size(criteria)) - failures - skips,
              failures, skips);
  return failures == 0 ? 0 : 1;
}
