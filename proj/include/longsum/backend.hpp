#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "longsum/common.hpp"
#include "longsum/text.hpp"

namespace longsum {

enum class BackendKind { identity, http_summarizer, completion_polisher };

inline std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::identity:
      return "identity";
    case BackendKind::http_summarizer:
      return "http_summarizer";
    case BackendKind::completion_polisher:
      return "completion_polisher";
  }
  return "identity";
}

inline BackendKind parse_backend_kind(std::string_view text) {
  if (text == "identity") return BackendKind::identity;
  if (text == "http_summarizer") return BackendKind::http_summarizer;
  if (text == "completion_polisher") return BackendKind::completion_polisher;
  throw ConfigError("unknown backend kind '" + std::string(text) +
                    "': expected identity, http_summarizer or "
                    "completion_polisher");
}

// Generation settings forwarded to remote servers that honor them.
struct GenerationParams {
  double length_penalty = 0.8;
  int num_beams = 5;
  int max_output_tokens = 256;
  std::optional<std::string> engine;  // completion backends; defaults to curie
  std::optional<double> temperature;

  void validate() const {
    if (num_beams < 1) throw ConfigError("generation num_beams must be >= 1");
    if (max_output_tokens < 1)
      throw ConfigError("generation max_output_tokens must be >= 1");
  }
};

struct InputLimits {
  int max_input_tokens = std::numeric_limits<int>::max();

  static InputLimits unlimited() { return {}; }
  static InputLimits bigbird() { return {4096}; }
  static InputLimits led() { return {8192}; }

  void validate() const {
    if (max_input_tokens < 1)
      throw ConfigError("limits max_input_tokens must be >= 1");
  }
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_backoff{1000};  // exponential, jittered
  std::chrono::milliseconds request_timeout{60000};

  void validate() const {
    if (max_attempts < 1) throw ConfigError("retry max_attempts must be >= 1");
  }
};

struct BackendSpec {
  BackendKind kind = BackendKind::identity;
  std::string endpoint;  // required for remote kinds
  GenerationParams generation;
  InputLimits limits;
  RetryPolicy retry;
  // Name of the environment variable holding the bearer token. The token
  // itself is read per request and never stored or serialized.
  std::optional<std::string> auth_env;

  bool remote() const { return kind != BackendKind::identity; }

  void validate() const {
    generation.validate();
    limits.validate();
    retry.validate();
    if (remote() && endpoint.empty())
      throw ConfigError(std::string("backend kind '") +
                        std::string(to_string(kind)) +
                        "' requires an endpoint URL");
    if (!remote() && !endpoint.empty())
      throw ConfigError("identity backend must not carry an endpoint");
  }
};

// Keeps whole sentences, in order, while the running token count stays
// within the limit; the first sentence is always kept so requests are never
// empty.
inline Document truncate_to_limit(const Document& doc,
                                  const InputLimits& limits) {
  limits.validate();
  Document out;
  out.id = doc.id;
  out.reference = doc.reference;
  long long budget = limits.max_input_tokens;
  for (const Sentence& s : doc.sentences) {
    const long long cost = static_cast<long long>(s.tokens.size());
    if (!out.sentences.empty() && cost > budget) break;
    Sentence kept = s;
    kept.index = out.sentences.size();
    out.sentences.push_back(std::move(kept));
    budget -= cost;
  }
  return out;
}

namespace detail {

// Bounded in-flight request limiter shared by every client in the process.
class InFlightLimiter {
 public:
  static InFlightLimiter& instance() {
    static InFlightLimiter limiter;
    return limiter;
  }

  void set_limit(int limit) {
    std::lock_guard<std::mutex> lock(mu_);
    limit_ = limit < 1 ? 1 : limit;
    cv_.notify_all();
  }

  class Guard {
   public:
    explicit Guard(InFlightLimiter& limiter) : limiter_(limiter) {
      std::unique_lock<std::mutex> lock(limiter_.mu_);
      limiter_.cv_.wait(lock,
                        [&] { return limiter_.active_ < limiter_.limit_; });
      ++limiter_.active_;
    }
    ~Guard() {
      std::lock_guard<std::mutex> lock(limiter_.mu_);
      --limiter_.active_;
      limiter_.cv_.notify_one();
    }
    Guard(const Guard&) = delete;
    Guard& operator=(const Guard&) = delete;

   private:
    InFlightLimiter& limiter_;
  };

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int limit_ = 4;
  int active_ = 0;
};

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // leading '/', default "/"
};

inline ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint '" + url +
                      "' is not a URL (expected http[s]://host[:port]/path)");
  auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.base = url;
    out.path = "/";
  } else {
    out.base = url.substr(0, path_start);
    out.path = url.substr(path_start);
  }
  return out;
}

inline std::chrono::milliseconds jittered_backoff(
    std::chrono::milliseconds base, int attempt) {
  thread_local std::mt19937 rng{std::random_device{}()};
  std::uniform_real_distribution<double> jitter(0.5, 1.0);
  double factor = std::ldexp(1.0, attempt - 1);  // 1, 2, 4, ...
  auto ms = static_cast<long long>(static_cast<double>(base.count()) *
                                   factor * jitter(rng));
  return std::chrono::milliseconds(ms);
}

}  // namespace detail

inline void set_max_in_flight_requests(int limit) {
  detail::InFlightLimiter::instance().set_limit(limit);
}

struct PolishResult {
  std::string text;
  bool fell_back = false;  // completion was empty; input returned instead
};

// Client for the two remote protocols. Stateless between calls; safe to
// share across threads.
class BackendClient {
 public:
  explicit BackendClient(BackendSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
  }

  const BackendSpec& spec() const { return spec_; }

  // identity: sentence texts joined with single spaces.
  // http_summarizer: POST {"id", "text", "params"} -> {"summary"}.
  std::string summarize(const Document& doc) const {
    if (spec_.kind == BackendKind::completion_polisher)
      throw ConfigError("a completion_polisher backend cannot summarize");
    if (spec_.kind == BackendKind::identity) return join_sentences(doc.sentences);
    nlohmann::json request = {
        {"id", doc.id},
        {"text", join_sentences(doc.sentences)},
        {"params",
         {{"length_penalty", spec_.generation.length_penalty},
          {"num_beams", spec_.generation.num_beams},
          {"max_output_tokens", spec_.generation.max_output_tokens}}},
    };
    nlohmann::json response = post_json(request, doc.id);
    if (!response.is_object() || !response.contains("summary") ||
        !response["summary"].is_string())
      throw BackendError("summarizer response violates the wire schema "
                         "(expected {\"summary\": string}) for document '" +
                             doc.id + "'",
                         doc.id, 1);
    return response["summary"].get<std::string>();
  }

  static std::string polish_prompt(std::string_view summary) {
    std::string prompt = "Original ";
    prompt += summary;
    prompt += ", Polished Sentence:";
    return prompt;
  }

  // POST {"engine", "prompt", ["temperature"], "max_tokens"} -> {"text"}.
  // An empty completion falls back to the input summary.
  PolishResult polish(std::string_view summary,
                      const std::string& doc_id = "") const {
    if (spec_.kind != BackendKind::completion_polisher)
      throw ConfigError("polish requires a completion_polisher backend");
    if (trim_view(summary).empty())
      throw std::invalid_argument("polish requires a non-empty summary");
    nlohmann::json request = {
        {"engine", spec_.generation.engine.value_or("curie")},
        {"prompt", polish_prompt(summary)},
        {"max_tokens", spec_.generation.max_output_tokens},
    };
    if (spec_.generation.temperature)
      request["temperature"] = *spec_.generation.temperature;
    nlohmann::json response = post_json(request, doc_id);
    if (!response.is_object() || !response.contains("text") ||
        !response["text"].is_string())
      throw BackendError("completion response violates the wire schema "
                         "(expected {\"text\": string})",
                         doc_id, 1);
    std::string text(trim_view(response["text"].get<std::string>()));
    if (text.empty()) return {std::string(summary), true};
    return {std::move(text), false};
  }

 private:
  std::optional<std::string> bearer_token() const {
    if (!spec_.auth_env) return std::nullopt;
    const char* value = std::getenv(spec_.auth_env->c_str());
    if (value == nullptr || *value == '\0')
      throw BackendError("auth token expected in environment variable '" +
                             *spec_.auth_env + "' but it is unset or empty",
                         "", 0);
    return std::string(value);
  }

  // Retries transport failures, 429 and 5xx with exponential backoff;
  // other statuses fail immediately.
  nlohmann::json post_json(const nlohmann::json& body,
                           const std::string& doc_id) const {
    const detail::ParsedUrl url = detail::parse_url(spec_.endpoint);
    const std::optional<std::string> token = bearer_token();
    const std::string payload = body.dump();
    std::string last_failure;
    for (int attempt = 1; attempt <= spec_.retry.max_attempts; ++attempt) {
      {
        detail::InFlightLimiter::Guard guard(
            detail::InFlightLimiter::instance());
        httplib::Client client(url.base);
        client.set_connection_timeout(spec_.retry.request_timeout);
        client.set_read_timeout(spec_.retry.request_timeout);
        client.set_write_timeout(spec_.retry.request_timeout);
        if (token) client.set_bearer_token_auth(*token);
        auto res = client.Post(url.path, payload, "application/json");
        if (res && res->status >= 200 && res->status < 300) {
          try {
            return nlohmann::json::parse(res->body);
          } catch (const std::exception& e) {
            throw BackendError("backend returned unparseable JSON for "
                               "document '" +
                                   doc_id + "': " + e.what(),
                               doc_id, attempt);
          }
        }
        if (res && res->status != 429 && res->status < 500)
          throw BackendError("backend request to " + spec_.endpoint +
                                 " failed with status " +
                                 std::to_string(res->status) +
                                 " for document '" + doc_id + "' (attempt " +
                                 std::to_string(attempt) + ")",
                             doc_id, attempt);
        last_failure = res ? "status " + std::to_string(res->status)
                           : "transport error (" +
                                 httplib::to_string(res.error()) + ")";
      }
      if (attempt < spec_.retry.max_attempts)
        std::this_thread::sleep_for(
            detail::jittered_backoff(spec_.retry.base_backoff, attempt));
    }
    throw BackendError("backend request to " + spec_.endpoint + " failed "
                           "after " +
                           std::to_string(spec_.retry.max_attempts) +
                           " attempts (" + last_failure + ") for document '" +
                           doc_id + "'",
                       doc_id, spec_.retry.max_attempts);
  }

  BackendSpec spec_;
};

inline std::string summarize(const BackendSpec& spec, const Document& doc) {
  return BackendClient(spec).summarize(doc);
}

inline PolishResult polish(const BackendSpec& spec, std::string_view summary) {
  return BackendClient(spec).polish(summary);
}

}  // namespace longsum
