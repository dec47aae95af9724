#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "engage/core/textio.hpp"
#include "engage/llm/types.hpp"

namespace engage::llm {

enum class RatingSource { direct, fallback };

inline std::string_view to_string(RatingSource s) { return s == RatingSource::direct ? "direct" : "fallback"; }

struct RatingOutcome {
  std::optional<int> rating;
  RatingSource source = RatingSource::direct;
  std::string raw_text;
};

/// Rating in [1,7] if `token` (whitespace-trimmed) is exactly an integer.
inline std::optional<int> numeric_token(std::string_view token) {
  token = io::trim(token);
  if (token.empty() || token.size() > 2) return std::nullopt;
  int v = 0;
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  if (v < 1 || v > 7) return std::nullopt;
  return v;
}

/// Leading integer of a reply such as "7", " 5.", "6 - agree". A reply that
/// opens with anything else ("[You] ...", "As an AI ...") has no leading number.
inline std::optional<int> leading_rating(std::string_view text) {
  text = io::trim(text);
  std::size_t n = 0;
  while (n < text.size() && std::isdigit(static_cast<unsigned char>(text[n]))) ++n;
  if (n == 0) return std::nullopt;
  if (n < text.size() && std::isalpha(static_cast<unsigned char>(text[n]))) return std::nullopt;
  return numeric_token(text.substr(0, n));
}

/// Direct parse of the reply text, else the most probable numeric first-token
/// candidate (earlier rank wins equal probabilities).
inline RatingOutcome parse_rating(const Completion& c) {
  if (auto r = leading_rating(c.text)) return {r, RatingSource::direct, c.text};
  const TokenCandidate* best = nullptr;
  std::optional<int> best_rating;
  for (const auto& cand : c.first_token_candidates) {
    auto r = numeric_token(cand.token);
    if (!r) continue;
    if (!best || cand.probability > best->probability) {
      best = &cand;
      best_rating = r;
    }
  }
  if (!best) throw NoNumericResponse();
  return {best_rating, RatingSource::fallback, c.text};
}

}  // namespace engage::llm
