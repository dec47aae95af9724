#pragma once

#include <array>
#include <string>

#include "engage/core/timeline.hpp"
#include "engage/fusion/render.hpp"
#include "fixtures.hpp"

namespace engage::testkit {

inline constexpr std::array<const char*, 4> kGoldenAblations = {"4", "4S", "4SG", "4SGF"};

inline std::string golden_name(const std::string& ablation) { return "greeting_" + ablation + ".jsonl"; }

/// Alice's prompt for the first questionnaire item, one message per line.
inline std::string render_greeting(const std::string& ablation) {
  const auto s = greeting_session();
  const auto conv = fusion::prepare_conversation(s, core::synchronize_timeline(s));
  const auto msgs = fusion::render_prompt(conv, "alice", core::engagement_items().front().statement,
                                          fusion::AblationSpec::parse(ablation));
  return fusion::messages_to_jsonl(msgs);
}

}  // namespace engage::testkit
