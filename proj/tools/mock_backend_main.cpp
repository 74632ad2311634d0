// Stand-in HTTP backend for local pipeline runs and manual testing.
//
//   POST /summarize  {"id","text","params"}            -> {"summary": ...}
//   POST /complete   {"engine","prompt","max_tokens"}  -> {"text": ...}
//
// The summary is the first sentence of the posted text; the completion is
// the polishable fragment lifted back out of the prompt. Flags inject
// failures, latency and an auth requirement so retry and error paths can be
// exercised end to end.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "longsum/text.hpp"

namespace {

std::string first_sentence(const std::string& text) {
  std::vector<std::string> sentences = longsum::segment_sentences(text);
  return sentences.empty() ? text : sentences.front();
}

// Recovers S from "Original S, Polished Sentence:"; falls back to echoing
// the prompt when it does not match that shape.
std::string polish_from_prompt(const std::string& prompt) {
  const std::string prefix = "Original ";
  const std::string suffix = ", Polished Sentence:";
  if (prompt.rfind(prefix, 0) == 0 && prompt.size() > prefix.size() &&
      prompt.size() >= prefix.size() + suffix.size() &&
      prompt.compare(prompt.size() - suffix.size(), suffix.size(), suffix) ==
          0) {
    return prompt.substr(prefix.size(),
                         prompt.size() - prefix.size() - suffix.size());
  }
  return prompt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock summarization/completion backend"};
  int port = 8080;
  int fail_first = 0;
  int latency_ms = 0;
  std::string token;
  bool verbose = false;
  app.add_option("--port", port, "Listen port (default 8080)");
  app.add_option("--fail", fail_first,
                 "Answer the first N requests with HTTP 500");
  app.add_option("--latency", latency_ms,
                 "Delay every response by this many milliseconds");
  app.add_option("--token", token,
                 "Require 'Authorization: Bearer <token>' when set");
  app.add_flag("-v,--verbose", verbose, "Log each request");
  CLI11_PARSE(app, argc, argv);

  std::atomic<int> remaining_failures{fail_first};
  httplib::Server server;

  auto gate = [&](const httplib::Request& req, httplib::Response& res) {
    if (latency_ms > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(latency_ms));
    if (!token.empty() &&
        req.get_header_value("Authorization") != "Bearer " + token) {
      res.status = 401;
      res.set_content("{\"error\":\"unauthorized\"}", "application/json");
      return false;
    }
    if (remaining_failures.fetch_sub(1) > 0) {
      res.status = 500;
      res.set_content("{\"error\":\"injected failure\"}", "application/json");
      return false;
    }
    return true;
  };

  server.Post("/summarize", [&](const httplib::Request& req,
                                httplib::Response& res) {
    if (verbose) std::cerr << "POST /summarize " << req.body << '\n';
    if (!gate(req, res)) return;
    try {
      nlohmann::json body = nlohmann::json::parse(req.body);
      nlohmann::json out = {
          {"summary", first_sentence(body.at("text").get<std::string>())}};
      res.set_content(out.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      nlohmann::json out = {{"error", e.what()}};
      res.set_content(out.dump(), "application/json");
    }
  });

  server.Post("/complete", [&](const httplib::Request& req,
                               httplib::Response& res) {
    if (verbose) std::cerr << "POST /complete " << req.body << '\n';
    if (!gate(req, res)) return;
    try {
      nlohmann::json body = nlohmann::json::parse(req.body);
      nlohmann::json out = {
          {"text", polish_from_prompt(body.at("prompt").get<std::string>())}};
      res.set_content(out.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      nlohmann::json out = {{"error", e.what()}};
      res.set_content(out.dump(), "application/json");
    }
  });

  std::printf("mock backend listening on http://127.0.0.1:%d\n", port);
  std::printf("  summarizer endpoint:  http://127.0.0.1:%d/summarize\n", port);
  std::printf("  completion endpoint:  http://127.0.0.1:%d/complete\n", port);
  if (!server.listen("0.0.0.0", port)) {
    std::cerr << "error: could not bind port " << port << '\n';
    return 1;
  }
  return 0;
}
