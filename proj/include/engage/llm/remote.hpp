#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
// <resolv.h> (pulled in by httplib) defines _res, which collides with Eigen.
#ifdef _res
#undef _res
#endif
#include <json.hpp>

#include "engage/llm/rate_limiter.hpp"
#include "engage/llm/types.hpp"

namespace engage::llm {

inline constexpr const char* kApiKeyEnv = "ENGAGE_API_KEY";

struct RemoteConfig {
  std::string endpoint = "https://api.openai.com";  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::optional<std::string> api_key;  // default: $ENGAGE_API_KEY
  int max_retries = 4;
  double backoff_initial_s = 1.0;
  double backoff_max_s = 30.0;
  double timeout_s = 60.0;
  double requests_per_minute = 0.0;
};

/// Wire body for an OpenAI-style /chat/completions call.
inline nlohmann::json request_to_json(const CompletionRequest& r) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : r.messages) msgs.push_back(fusion::to_json(m));
  return {{"model", r.model_id},
          {"messages", std::move(msgs)},
          {"temperature", r.temperature},
          {"max_tokens", r.max_tokens},
          {"logprobs", true},
          {"top_logprobs", r.want_top_logprobs}};
}

inline Completion completion_from_json(const nlohmann::json& body) {
  try {
    const auto& choice = body.at("choices").at(0);
    Completion c;
    const auto& content = choice.at("message").at("content");
    c.text = content.is_null() ? std::string{} : content.get<std::string>();
    const auto reason = choice.value("finish_reason", std::string("stop"));
    c.finish_reason = reason == "stop" ? FinishReason::stop
                      : reason == "length" ? FinishReason::length
                                           : FinishReason::error;
    if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
        choice["logprobs"].contains("content") && choice["logprobs"]["content"].is_array() &&
        !choice["logprobs"]["content"].empty()) {
      for (const auto& t : choice["logprobs"]["content"][0].at("top_logprobs")) {
        c.first_token_candidates.push_back({t.at("token").get<std::string>(), std::exp(t.at("logprob").get<double>())});
      }
    }
    normalize_candidates(c.first_token_candidates);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("unexpected completion body: ") + e.what());
  }
}

/// Remote chat-completions client. Retries connection failures, 408/409/429
/// and 5xx with capped exponential backoff; never retries other 4xx.
class RemoteBackend final : public Backend {
 public:
  using Sleeper = std::function<void(std::chrono::duration<double>)>;

  explicit RemoteBackend(RemoteConfig cfg, Sleeper sleeper = {})
      : cfg_(std::move(cfg)), limiter_(cfg_.requests_per_minute), sleep_(std::move(sleeper)) {
    if (!sleep_) sleep_ = [](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); };
    if (!cfg_.api_key) {
      if (const char* k = std::getenv(kApiKeyEnv); k && *k) cfg_.api_key = k;
    }
  }

  std::string name() const override { return "remote"; }
  std::size_t network_requests() const override { return sent_.load(); }
  bool has_credentials() const { return cfg_.api_key && !cfg_.api_key->empty(); }

  Completion complete(const CompletionRequest& request) override {
    request.check();
    if (!cfg_.api_key || cfg_.api_key->empty()) {
      throw AuthError(std::string("no API key: set ") + kApiKeyEnv);
    }
    const std::string body = request_to_json(request).dump();
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        const double wait = std::min(cfg_.backoff_max_s, cfg_.backoff_initial_s * std::pow(2.0, attempt - 1));
        sleep_(std::chrono::duration<double>(wait));
      }
      limiter_.acquire();
      httplib::Client cli(cfg_.endpoint);
      const auto timeout = std::chrono::duration<double>(cfg_.timeout_s);
      cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
      cli.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
      cli.set_bearer_token_auth(*cfg_.api_key);
      ++sent_;
      auto res = cli.Post(cfg_.path, body, "application/json");
      if (!res) {
        last_error = "connection failed: " + httplib::to_string(res.error());
        continue;
      }
      const int status = res->status;
      if (status == 200) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::parse_error& e) {
          throw SchemaError(std::string("completion body is not JSON: ") + e.what());
        }
        return completion_from_json(j);
      }
      if (status == 401 || status == 403) throw AuthError("backend rejected credentials (HTTP " + std::to_string(status) + ")");
      if (is_context_overflow(status, res->body)) throw ContextOverflow("prompt exceeds the model context window");
      if (status == 408 || status == 409 || status == 429 || status >= 500) {
        last_error = "HTTP " + std::to_string(status);
        continue;
      }
      throw SchemaError("backend rejected request (HTTP " + std::to_string(status) + "): " + res->body.substr(0, 300));
    }
    throw TransportError("giving up after " + std::to_string(cfg_.max_retries + 1) + " attempts: " + last_error);
  }

 private:
  static bool is_context_overflow(int status, const std::string& body) {
    if (status != 400 && status != 413) return false;
    if (status == 413) return true;
    try {
      const auto j = nlohmann::json::parse(body);
      const auto& err = j.at("error");
      if (err.value("code", std::string{}) == "context_length_exceeded") return true;
      return err.value("message", std::string{}).find("maximum context length") != std::string::npos;
    } catch (const nlohmann::json::exception&) {
      return false;
    }
  }

  RemoteConfig cfg_;
  RateLimiter limiter_;
  Sleeper sleep_;
  std::atomic<std::size_t> sent_{0};
};

}  // namespace engage::llm
