#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engage/fusion/render.hpp"

namespace engage::llm {

using fusion::ChatMessage;
using fusion::Role;

struct CompletionRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 50;
  int want_top_logprobs = 20;  // in [1, 20]
  std::string model_id = "gpt-4-0613";

  void check() const {
    if (temperature < 0.0) throw Error("temperature must be >= 0");
    if (want_top_logprobs < 1 || want_top_logprobs > 20) throw Error("want_top_logprobs must be in [1, 20]");
    if (max_tokens < 1) throw Error("max_tokens must be >= 1");
  }
};

enum class FinishReason { stop, length, error };

inline std::string_view to_string(FinishReason f) {
  switch (f) {
    case FinishReason::stop: return "stop";
    case FinishReason::length: return "length";
    case FinishReason::error: return "error";
  }
  return "error";
}

struct TokenCandidate {
  std::string token;
  double probability = 0.0;
  friend bool operator==(const TokenCandidate&, const TokenCandidate&) = default;
};

struct Completion {
  std::string text;
  std::vector<TokenCandidate> first_token_candidates;  // descending, at most 20
  FinishReason finish_reason = FinishReason::stop;
  friend bool operator==(const Completion&, const Completion&) = default;
};

/// Sorts candidates by descending probability (stable, so rank breaks ties),
/// clamps probabilities into [0,1] and keeps at most `limit`.
inline void normalize_candidates(std::vector<TokenCandidate>& c, std::size_t limit = 20) {
  for (auto& t : c) t.probability = std::clamp(t.probability, 0.0, 1.0);
  std::stable_sort(c.begin(), c.end(),
                   [](const TokenCandidate& a, const TokenCandidate& b) { return a.probability > b.probability; });
  if (c.size() > limit) c.resize(limit);
}

/// Chat-completion backend. Implementations must be safe to call from
/// several threads at once.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual Completion complete(const CompletionRequest& request) = 0;
  /// Requests that left the process. Zero for in-process backends.
  virtual std::size_t network_requests() const { return 0; }
  virtual std::string name() const = 0;
};

}  // namespace engage::llm
