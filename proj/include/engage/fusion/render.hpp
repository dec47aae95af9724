#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "engage/core/types.hpp"
#include "engage/data/embedded.hpp"
#include "engage/fusion/turns.hpp"

namespace engage::fusion {

enum class Role { system, user, assistant };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

inline std::optional<Role> parse_role(std::string_view s) {
  if (s == "system") return Role::system;
  if (s == "user") return Role::user;
  if (s == "assistant") return Role::assistant;
  return std::nullopt;
}

struct ChatMessage {
  Role role = Role::user;
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Which optional modalities go into the transcript: (S)ystem persona,
/// (G)aze, (F)ace. The raw dialogue ("4") is always present.
struct AblationSpec {
  bool persona = false;
  bool gaze = false;
  bool face = false;

  /// Accepts "4SGF", "SGF", "4", "" and any order of the letters.
  static AblationSpec parse(std::string_view code) {
    AblationSpec a;
    if (!code.empty() && code.front() == '4') code.remove_prefix(1);
    for (char c : code) {
      bool* flag = c == 'S' ? &a.persona : c == 'G' ? &a.gaze : c == 'F' ? &a.face : nullptr;
      if (!flag) throw Error("ablation letters must be from {S,G,F}: '" + std::string(1, c) + "'");
      if (*flag) throw Error("ablation letter repeated: '" + std::string(1, c) + "'");
      *flag = true;
    }
    return a;
  }

  std::string tag() const {
    std::string t = "4";
    if (persona) t += 'S';
    if (gaze) t += 'G';
    if (face) t += 'F';
    return t;
  }
  friend bool operator==(const AblationSpec&, const AblationSpec&) = default;
};

/// Emotion label -> facial description used in the face lines.
struct EmotionLexicon {
  std::array<std::string, features::kEmotionCount> descriptions;

  const std::string& describe(EmotionLabel e) const { return descriptions[static_cast<std::size_t>(e)]; }

  std::optional<EmotionLabel> lookup(std::string_view description) const {
    for (auto e : features::kEmotionPriority) {
      if (describe(e) == description) return e;
    }
    return std::nullopt;
  }

  static EmotionLexicon from_json(const nlohmann::json& j) {
    EmotionLexicon lex;
    const auto& d = j.at("descriptions");
    for (auto e : features::kEmotionPriority) {
      const auto key = std::string(features::to_string(e));
      if (!d.contains(key)) throw Error("emotion lexicon lacks a description for " + key);
      lex.descriptions[static_cast<std::size_t>(e)] = d.at(key).get<std::string>();
    }
    return lex;
  }

  static const EmotionLexicon& builtin() {
    static const EmotionLexicon lex = from_json(nlohmann::json::parse(data::emotion_descriptions));
    return lex;
  }
};

struct Participant {
  std::string wearer_id;
  std::string display_name;
  core::PersonaProfile persona;
};

/// Everything needed to render transcripts for one session: both
/// participants and the merged, annotated turns.
struct Conversation {
  std::string session_id;
  std::array<Participant, 2> participants;
  double conversation_start = 0.0;
  std::vector<Turn> turns;

  std::size_t index_of(const std::string& wearer) const {
    for (std::size_t i = 0; i < 2; ++i) {
      if (participants[i].wearer_id == wearer) return i;
    }
    throw Error("conversation " + session_id + " has no participant " + wearer);
  }
};

inline Conversation prepare_conversation(const core::Session& s, const core::FrameTimeline& tl) {
  Conversation c;
  c.session_id = s.manifest.session_id;
  for (std::size_t i = 0; i < 2; ++i) {
    c.participants[i] = {s.wearers[i].decl.wearer_id, s.wearers[i].decl.display_name, s.wearers[i].persona};
  }
  c.conversation_start = s.manifest.conversation_start;
  c.turns = merge_segments(s.segments);
  attach_cues(c.turns, tl);
  return c;
}

inline constexpr std::string_view kScaleInstruction =
    "On a scale of 1 to 7, where 1 means strongly disagree and 7 means strongly agree, how would you "
    "rate the following statement given the conversation you just had?";
inline constexpr std::string_view kPrivacyFooter =
    "Your answers will be kept private and your conversation partner will not see the responses, so "
    "please be as honest as possible. Provide your answer in the form of an integer between 1 and 7.";

/// Annotation block for one turn from the simulated wearer's point of view,
/// or "" when neither gaze nor face is enabled.
inline std::string annotate_turn(const Turn& turn, const Conversation& conv, const std::string& perspective,
                                 const AblationSpec& ablation,
                                 const EmotionLexicon& lex = EmotionLexicon::builtin()) {
  if (!ablation.gaze && !ablation.face) return {};
  const std::size_t me = conv.index_of(perspective);
  const std::size_t partner = 1 - me;
  const auto& mine = turn.cues[me];
  const auto& theirs = turn.cues[partner];
  const bool i_speak = turn.speaker == conv.participants[me].wearer_id;

  std::vector<std::string> lines;
  if (ablation.gaze) {
    lines.push_back("You are looking at your partner's face about " + std::to_string(mine.gaze_decile) +
                    "% of the time.");
  }
  if (ablation.face) {
    lines.push_back((i_speak ? "You are speaking mostly with " : "You are listening to your partner mostly with ") +
                    lex.describe(mine.emotion) + ".");
  }
  if (ablation.gaze) {
    lines.push_back("Your partner is looking at your face about " + std::to_string(theirs.gaze_decile) +
                    "% of the time.");
  }
  if (ablation.face) {
    lines.push_back((i_speak ? "Your partner is listening to you mostly with " : "Your partner is speaking mostly with ") +
                    lex.describe(theirs.emotion) + ".");
  }
  std::string block = "[";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) block += '\n';
    block += lines[i];
  }
  block += ']';
  return block;
}

inline std::string render_system_message(const core::PersonaProfile& persona, const std::string& partner_name,
                                         const AblationSpec& ablation) {
  std::string s = "You are " + persona.affiliation +
                  ". You are participating in a psychology study that aims to understand how people "
                  "communicate, and you are participating in a conversation with " +
                  partner_name +
                  " as part of this study. There will be a questionnaire at the end of this conversation. "
                  "Others will read what you answer; your goal is to convince them it was answered from the "
                  "perspective of the persona that participated in the following conversation.";
  if (!ablation.persona) return s;
  if (!persona.big_five.empty()) {
    s += "\n\nYour personality traits are defined by the scores to the following statements. The scores "
         "range from 1 to 5, where 1 means strongly disagree and 5 means strongly agree.";
    for (const auto& b : persona.big_five) s += "\n" + b.statement + " " + std::to_string(b.score);
  }
  if (!persona.beliefs.empty()) {
    s += "\n\nYour political beliefs are defined by the following statements:";
    for (const auto& b : persona.beliefs) s += "\n" + b.selected_statement;
  }
  return s;
}

inline ChatMessage experimenter_message(std::string_view item) {
  std::string c = "[Experimenter] ";
  c += kScaleInstruction;
  c += '\n';
  c += item;
  c += '\n';
  c += kPrivacyFooter;
  return {Role::user, std::move(c)};
}

/// System message, one message per turn (assistant for the simulated
/// wearer's turns, user for the partner's), then the experimenter's item.
inline std::vector<ChatMessage> build_chat(const Conversation& conv, std::span<const Turn> turns,
                                           const std::string& simulated, std::string_view item,
                                           const AblationSpec& ablation,
                                           const EmotionLexicon& lex = EmotionLexicon::builtin()) {
  if (turns.empty()) throw NoTurns();
  if (io::trim(item).empty()) throw Error("questionnaire item is empty");
  const std::size_t me = conv.index_of(simulated);
  const auto& self = conv.participants[me];
  const auto& other = conv.participants[1 - me];

  std::vector<ChatMessage> msgs;
  msgs.reserve(turns.size() + 2);
  msgs.push_back({Role::system, render_system_message(self.persona, other.display_name, ablation)});
  for (const auto& t : turns) {
    const bool mine = t.speaker == self.wearer_id;
    std::string content = mine ? "[You]\n" : "[Partner]\n";
    const auto block = annotate_turn(t, conv, simulated, ablation, lex);
    if (!block.empty()) {
      content += block;
      content += '\n';
    }
    content += t.text;
    msgs.push_back({mine ? Role::assistant : Role::user, std::move(content)});
  }
  msgs.push_back(experimenter_message(item));
  return msgs;
}

inline std::vector<ChatMessage> build_chat(const Conversation& conv, const std::string& simulated,
                                           std::string_view item, const AblationSpec& ablation,
                                           const EmotionLexicon& lex = EmotionLexicon::builtin()) {
  return build_chat(conv, conv.turns, simulated, item, ablation, lex);
}

using TokenEstimator = std::function<std::size_t(std::string_view)>;

/// Default estimate: one token per four characters, rounded up.
inline std::size_t chars_per_four(std::string_view s) { return (s.size() + 3) / 4; }

inline std::size_t estimate_tokens(std::span<const ChatMessage> msgs, const TokenEstimator& est = chars_per_four) {
  std::size_t n = 0;
  for (const auto& m : msgs) n += est(m.content);
  return n;
}

struct TruncationOptions {
  double budget_seconds = 300.0;
  std::optional<std::size_t> token_budget;
  TokenEstimator estimator = chars_per_four;
};

/// Five-minute cut, then (if a token budget is set) drop the latest turns
/// until the rendered message list fits. The result may be empty when even
/// a single turn does not fit.
inline std::vector<Turn> truncate_transcript(const Conversation& conv, const std::string& simulated,
                                             std::string_view item, const AblationSpec& ablation,
                                             const TruncationOptions& opt = {},
                                             const EmotionLexicon& lex = EmotionLexicon::builtin()) {
  auto kept = truncate_by_time(conv.turns, conv.conversation_start, opt.budget_seconds);
  if (!opt.token_budget) return kept;
  while (!kept.empty()) {
    const auto msgs = build_chat(conv, kept, simulated, item, ablation, lex);
    if (estimate_tokens(msgs, opt.estimator) <= *opt.token_budget) break;
    kept.pop_back();
  }
  return kept;
}

inline std::vector<ChatMessage> render_prompt(const Conversation& conv, const std::string& simulated,
                                              std::string_view item, const AblationSpec& ablation,
                                              const TruncationOptions& opt = {},
                                              const EmotionLexicon& lex = EmotionLexicon::builtin()) {
  const auto kept = truncate_transcript(conv, simulated, item, ablation, opt, lex);
  return build_chat(conv, kept, simulated, item, ablation, lex);
}

inline nlohmann::json to_json(const ChatMessage& m) {
  return {{"role", std::string(to_string(m.role))}, {"content", m.content}};
}

/// One {role, content} record per line.
inline std::string messages_to_jsonl(std::span<const ChatMessage> msgs) {
  std::string out;
  for (const auto& m : msgs) {
    out += to_json(m).dump();
    out += '\n';
  }
  return out;
}

}  // namespace engage::fusion
