#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "engage/data/embedded.hpp"
#include "engage/error.hpp"

namespace engage::features {

/// Ordered by tie-break priority: earlier labels win ties, neutral is last.
enum class EmotionLabel : std::uint8_t {
  happy,
  fear,
  surprise,
  anger,
  disgust,
  sad,
  contempt,
  neutral,
};

inline constexpr std::size_t kEmotionCount = 8;

inline constexpr std::array<EmotionLabel, kEmotionCount> kEmotionPriority = {
    EmotionLabel::happy,   EmotionLabel::fear, EmotionLabel::surprise, EmotionLabel::anger,
    EmotionLabel::disgust, EmotionLabel::sad,  EmotionLabel::contempt, EmotionLabel::neutral,
};

inline std::string_view to_string(EmotionLabel e) {
  switch (e) {
    case EmotionLabel::happy: return "happy";
    case EmotionLabel::fear: return "fear";
    case EmotionLabel::surprise: return "surprise";
    case EmotionLabel::anger: return "anger";
    case EmotionLabel::disgust: return "disgust";
    case EmotionLabel::sad: return "sad";
    case EmotionLabel::contempt: return "contempt";
    case EmotionLabel::neutral: return "neutral";
  }
  return "neutral";
}

inline std::optional<EmotionLabel> parse_emotion(std::string_view s) {
  for (auto e : kEmotionPriority) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

/// One frame of facial action units for one person. Intensities are OpenFace
/// style [0,5]; presence flags are optional per AU. `label` carries a
/// precomputed emotion when the upstream extractor already produced one.
struct AuFrame {
  std::int64_t frame = 0;
  std::map<std::string, double> intensity;
  std::map<std::string, bool> presence;
  std::optional<EmotionLabel> label;
  friend bool operator==(const AuFrame&, const AuFrame&) = default;
};

struct EmotionRule {
  EmotionLabel emotion = EmotionLabel::neutral;
  std::vector<std::string> require;
  std::vector<std::string> forbid;
};

/// AU -> emotion mapping, evaluated top to bottom; first matching rule wins.
struct EmotionTable {
  int version = 1;
  double presence_threshold = 1.0;
  std::vector<EmotionRule> rules;

  static EmotionTable from_json(const nlohmann::json& j) {
    EmotionTable t;
    t.version = j.value("version", 1);
    t.presence_threshold = j.value("presence_threshold", 1.0);
    for (const auto& r : j.at("rules")) {
      auto e = parse_emotion(r.at("emotion").get<std::string>());
      if (!e || *e == EmotionLabel::neutral) {
        throw Error("emotion table: bad rule emotion " + r.at("emotion").dump());
      }
      t.rules.push_back({*e, r.at("require").get<std::vector<std::string>>(),
                         r.value("forbid", std::vector<std::string>{})});
    }
    return t;
  }

  static const EmotionTable& builtin() {
    static const EmotionTable table = from_json(nlohmann::json::parse(data::au_emotion_table));
    return table;
  }
};

/// Explicit presence flag wins; otherwise intensity >= threshold.
inline bool au_active(const AuFrame& au, const std::string& id, double threshold) {
  if (auto it = au.presence.find(id); it != au.presence.end()) return it->second;
  if (auto it = au.intensity.find(id); it != au.intensity.end()) return it->second >= threshold;
  return false;
}

inline EmotionLabel classify_emotion_frame(const AuFrame& au,
                                           const EmotionTable& table = EmotionTable::builtin()) {
  if (au.label) return *au.label;
  for (const auto& rule : table.rules) {
    bool ok = true;
    for (const auto& id : rule.require) ok = ok && au_active(au, id, table.presence_threshold);
    for (const auto& id : rule.forbid) ok = ok && !au_active(au, id, table.presence_threshold);
    if (ok) return rule.emotion;
  }
  return EmotionLabel::neutral;
}

/// Modal label of a run of per-frame labels. Ties go to the earlier label in
/// kEmotionPriority.
template <typename Range>
EmotionLabel modal_emotion(const Range& labels) {
  std::array<std::size_t, kEmotionCount> counts{};
  std::size_t n = 0;
  for (EmotionLabel e : labels) {
    ++counts[static_cast<std::size_t>(e)];
    ++n;
  }
  if (n == 0) throw EmptyWindow();
  EmotionLabel best = EmotionLabel::neutral;
  std::size_t best_count = 0;
  for (auto e : kEmotionPriority) {
    if (counts[static_cast<std::size_t>(e)] > best_count) {
      best = e;
      best_count = counts[static_cast<std::size_t>(e)];
    }
  }
  return best;
}

}  // namespace engage::features
