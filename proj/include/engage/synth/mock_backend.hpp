#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engage/core/instrument.hpp"
#include "engage/core/textio.hpp"
#include "engage/fusion/render.hpp"
#include "engage/llm/types.hpp"
#include "engage/synth/rng.hpp"

namespace engage::synth {

struct MockConfig {
  double refusal_rate = 0.0;  // share of requests answered with a non-numeric reply
  std::uint64_t seed = 0;     // mixes into the refusal hash
  /// Item polarity sidecar; the built-in questionnaire when empty.
  std::vector<core::QuestionnaireItem> items;
  fusion::EmotionLexicon lexicon = fusion::EmotionLexicon::builtin();
};

/// What the mock extracted from a rendered transcript.
struct TranscriptCues {
  std::vector<int> own_gaze;  // percentages on the simulated wearer's gaze lines
  std::size_t own_faces = 0;
  std::size_t own_happy = 0;
  std::size_t own_lines = 0;
  std::size_t own_engaged_lines = 0;
  std::size_t own_flat_lines = 0;
  std::string item;
};

namespace mock_detail {

inline constexpr std::string_view kOwnGaze = "You are looking at your partner's face about ";
inline constexpr std::string_view kOwnSpeaking = "You are speaking mostly with ";
inline constexpr std::string_view kOwnListening = "You are listening to your partner mostly with ";

inline const std::array<std::string_view, 14> kEngagedWords = {
    "love", "fascinating", "great", "amazing", "really", "curious", "absolutely",
    "exciting", "interesting", "wow", "tell me", "!", "totally", "want to know"};

inline const std::array<std::string_view, 12> kFlatWords = {
    "okay", "i guess", "not sure", "whatever", "don't know", "maybe",
    "fine", "suppose", "not really", "uh", "mm", "could be"};

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::size_t count_hits(const std::string& text, auto const& words) {
  std::size_t n = 0;
  for (auto w : words) {
    for (auto pos = text.find(w); pos != std::string::npos; pos = text.find(w, pos + w.size())) ++n;
  }
  return n;
}

}  // namespace mock_detail

/// Reads the experimenter item and the simulated wearer's own cues from the
/// message list. Throws TemplateUnrecognized when the experimenter message
/// is missing.
inline TranscriptCues read_transcript(const std::vector<llm::ChatMessage>& msgs, const fusion::EmotionLexicon& lex) {
  using namespace mock_detail;
  TranscriptCues c;
  bool found = false;
  for (const auto& m : msgs) {
    if (m.role != fusion::Role::user) continue;
    const auto at = m.content.find(fusion::kScaleInstruction);
    if (at == std::string::npos) continue;
    const auto lines = io::split_lines(std::string_view(m.content).substr(at));
    if (lines.size() < 2 || m.content.find(fusion::kPrivacyFooter) == std::string::npos) continue;
    c.item = std::string(io::trim(lines[1]));
    found = true;
  }
  if (!found) throw TemplateUnrecognized();

  for (const auto& m : msgs) {
    if (m.role != fusion::Role::assistant) continue;
    const auto lines = io::split_lines(m.content);
    std::string text;
    for (auto raw : lines) {
      auto line = io::trim(raw);
      if (!line.empty() && line.front() == '[') line.remove_prefix(1);
      if (!line.empty() && line.back() == ']') line.remove_suffix(1);
      if (line == "You") continue;
      if (line.starts_with(kOwnGaze)) {
        const auto v = io::parse_double(line.substr(kOwnGaze.size(), line.find('%') - kOwnGaze.size()));
        if (v) c.own_gaze.push_back(static_cast<int>(*v));
        continue;
      }
      std::string_view desc;
      if (line.starts_with(kOwnSpeaking)) desc = line.substr(kOwnSpeaking.size());
      else if (line.starts_with(kOwnListening)) desc = line.substr(kOwnListening.size());
      if (!desc.empty()) {
        if (desc.back() == '.') desc.remove_suffix(1);
        if (auto e = lex.lookup(desc)) {
          ++c.own_faces;
          if (*e == features::EmotionLabel::happy) ++c.own_happy;
        }
        continue;
      }
      if (line.starts_with("Your partner ")) continue;
      text += ' ';
      text += line;
    }
    const auto low = lower(text);
    const auto pos = count_hits(low, kEngagedWords);
    const auto neg = count_hits(low, kFlatWords);
    ++c.own_lines;
    if (pos > neg) ++c.own_engaged_lines;
    else if (neg > pos) ++c.own_flat_lines;
  }
  return c;
}

/// Engagement estimate in [0,1] from whichever cues are present: gaze
/// weighs 0.5, face 0.25, text 0.25, renormalised over available cues.
inline double engagement_score(const TranscriptCues& c) {
  double num = 0.0, den = 0.0;
  if (!c.own_gaze.empty()) {
    double g = 0.0;
    for (int v : c.own_gaze) g += v;
    g /= 100.0 * static_cast<double>(c.own_gaze.size());
    num += 0.5 * std::clamp((g - 0.3) / 0.6, 0.0, 1.0);
    den += 0.5;
  }
  if (c.own_faces > 0) {
    const double h = static_cast<double>(c.own_happy) / static_cast<double>(c.own_faces);
    num += 0.25 * std::clamp((h - 0.15) / 0.7, 0.0, 1.0);
    den += 0.25;
  }
  if (c.own_engaged_lines + c.own_flat_lines > 0) {
    num += 0.25 * static_cast<double>(c.own_engaged_lines) /
           static_cast<double>(c.own_engaged_lines + c.own_flat_lines);
    den += 0.25;
  }
  return den > 0.0 ? num / den : 0.5;
}

/// Deterministic in-process chat backend that role-plays from the cues in
/// the rendered transcript.
class MockBackend final : public llm::Backend {
 public:
  explicit MockBackend(MockConfig cfg = {}) : cfg_(std::move(cfg)) {
    const auto& items = cfg_.items.empty() ? core::engagement_items() : cfg_.items;
    for (const auto& it : items) negative_[it.statement] = it.negatively_coded;
  }

  std::string name() const override { return "mock"; }
  std::size_t invocations() const { return calls_.load(); }

  llm::Completion complete(const llm::CompletionRequest& request) override {
    ++calls_;
    request.check();
    const auto cues = read_transcript(request.messages, cfg_.lexicon);
    double s = engagement_score(cues);
    if (auto it = negative_.find(cues.item); it != negative_.end() && it->second) s = 1.0 - s;
    const int answer = static_cast<int>(std::clamp(std::floor(1.0 + 6.0 * s + 0.5), 1.0, 7.0));

    std::uint64_t h = splitmix64(cfg_.seed);
    for (const auto& m : request.messages) h = fnv1a(m.content, h);
    const bool refuse = static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53 < cfg_.refusal_rate;

    llm::Completion c = refuse ? refusal(answer) : numeric(answer);
    c.first_token_candidates.resize(std::min<std::size_t>(c.first_token_candidates.size(),
                                                          static_cast<std::size_t>(request.want_top_logprobs)));
    truncate(c, request.max_tokens);
    return c;
  }

 private:
  /// The other six ratings, nearest to `answer` first (higher side first on ties).
  static std::vector<int> others(int answer) {
    std::vector<int> v;
    for (int r = 1; r <= 7; ++r) {
      if (r != answer) v.push_back(r);
    }
    std::stable_sort(v.begin(), v.end(), [answer](int a, int b) {
      const int da = std::abs(a - answer), db = std::abs(b - answer);
      return da != db ? da < db : a > b;
    });
    return v;
  }

  static llm::Completion numeric(int answer) {
    static const std::array<const char*, 16> kFiller = {"I", "As", "The", "My", "Based", "On", "Given", "\n",
                                                        "It", "Honestly", "Well", "In", "This", "Overall", "Sure", "Rating"};
    llm::Completion c;
    c.text = std::to_string(answer);
    const auto near = others(answer);
    c.first_token_candidates.push_back({std::to_string(answer), 0.62});
    c.first_token_candidates.push_back({std::to_string(near[0]), 0.17});
    c.first_token_candidates.push_back({std::to_string(near[1]), 0.09});
    c.first_token_candidates.push_back({std::to_string(near[2]), 0.03});
    double p = 0.02;
    for (const char* tok : kFiller) {
      if (c.first_token_candidates.size() == 20) break;
      c.first_token_candidates.push_back({tok, p});
      p *= 0.7;
    }
    return c;
  }

  /// Non-numeric reply; the numeric answer sits at rank 14, a neighbour at 15
  /// and another at 19.
  static llm::Completion refusal(int answer) {
    static const std::array<const char*, 13> kHead = {"As", "I", "Sorry", "Unfortunately", "While",
                                                      "The", "It", "Since", "Being", "This",
                                                      "Given", "My", "Without"};
    static const std::array<const char*, 3> kTail = {"However", "In", "Although"};
    llm::Completion c;
    c.text =
        "As an AI language model, I do not have personal experiences or feelings, so I cannot rate this "
        "conversation myself.";
    double p = 0.5;
    for (const char* tok : kHead) {
      c.first_token_candidates.push_back({tok, p});
      p *= 0.62;
    }
    c.first_token_candidates.push_back({std::to_string(answer), p});
    p *= 0.8;
    const auto near = others(answer);
    c.first_token_candidates.push_back({std::to_string(near[0]), p});
    for (const char* tok : kTail) {
      p *= 0.8;
      c.first_token_candidates.push_back({tok, p});
    }
    p *= 0.8;
    c.first_token_candidates.push_back({std::to_string(near[1]), p});
    p *= 0.8;
    c.first_token_candidates.push_back({"Please", p});
    return c;
  }

  /// Keeps at most max_tokens whitespace-separated words.
  static void truncate(llm::Completion& c, int max_tokens) {
    std::size_t words = 0;
    bool in_word = false;
    for (std::size_t i = 0; i < c.text.size(); ++i) {
      const bool space = std::isspace(static_cast<unsigned char>(c.text[i]));
      if (!space && !in_word && ++words > static_cast<std::size_t>(max_tokens)) {
        c.text = std::string(io::trim(c.text.substr(0, i)));
        c.finish_reason = llm::FinishReason::length;
        return;
      }
      in_word = !space;
    }
  }

  MockConfig cfg_;
  std::map<std::string, bool> negative_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace engage::synth
