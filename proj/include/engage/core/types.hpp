#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "engage/error.hpp"
#include "engage/features/emotion.hpp"
#include "engage/features/geometry.hpp"

namespace engage::core {

using features::AuFrame;
using features::EmotionLabel;
using features::Point;

inline constexpr std::size_t kLandmarkCount = 478;

struct WearerDecl {
  std::string wearer_id;
  std::string display_name;
  std::string speaker_label;
  std::string gaze_file;
  std::string landmark_file;
  std::string au_file;
  std::string persona_file;
  friend bool operator==(const WearerDecl&, const WearerDecl&) = default;
};

struct SessionManifest {
  std::string session_id;
  std::string dyad_id;
  std::array<WearerDecl, 2> wearers;
  std::string transcript_file;
  std::optional<std::string> truth_file;
  std::optional<std::string> embedding_file;
  double conversation_start = 0.0;  // seconds after the sync clap
  double fps = 30.0;
  friend bool operator==(const SessionManifest&, const SessionManifest&) = default;
};

struct TranscriptSegment {
  double start = 0.0;
  double end = 0.0;
  std::string speaker_label;
  std::string text;
  std::string wearer_id;  // resolved from speaker_label at load time
  friend bool operator==(const TranscriptSegment&, const TranscriptSegment&) = default;
};

struct GazeSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

/// Face landmarks of the conversation partner as seen from this wearer's
/// scene camera.
struct LandmarkFrame {
  std::int64_t frame = 0;
  bool detected = false;
  std::vector<Point> points;
  friend bool operator==(const LandmarkFrame&, const LandmarkFrame&) = default;
};

struct BigFiveAnswer {
  std::string statement;
  int score = 3;
  friend bool operator==(const BigFiveAnswer&, const BigFiveAnswer&) = default;
};

struct BeliefAnswer {
  std::string topic;
  std::string selected_statement;
  friend bool operator==(const BeliefAnswer&, const BeliefAnswer&) = default;
};

struct PersonaProfile {
  std::vector<BigFiveAnswer> big_five;
  std::vector<BeliefAnswer> beliefs;
  std::string affiliation;
  friend bool operator==(const PersonaProfile&, const PersonaProfile&) = default;
};

struct QuestionnaireItem {
  std::string item_id;
  std::string statement;
  bool negatively_coded = false;
  friend bool operator==(const QuestionnaireItem&, const QuestionnaireItem&) = default;
};

struct EngagementTruth {
  std::vector<QuestionnaireItem> items;
  /// (wearer_id, item_id) -> rating. Range is checked by validate_session.
  std::map<std::pair<std::string, std::string>, int> responses;

  std::optional<int> response(const std::string& wearer, const std::string& item) const {
    auto it = responses.find({wearer, item});
    if (it == responses.end()) return std::nullopt;
    return it->second;
  }
  friend bool operator==(const EngagementTruth&, const EngagementTruth&) = default;
};

struct WearerStreams {
  WearerDecl decl;
  std::vector<GazeSample> gaze;
  std::vector<LandmarkFrame> landmarks;  // sorted by frame
  std::vector<AuFrame> aus;              // this wearer's own face, sorted by frame
  PersonaProfile persona;
  friend bool operator==(const WearerStreams&, const WearerStreams&) = default;
};

struct Session {
  SessionManifest manifest;
  std::vector<TranscriptSegment> segments;  // sorted by start
  std::array<WearerStreams, 2> wearers;
  std::optional<EngagementTruth> truth;
  std::filesystem::path directory;  // where the manifest lives; not part of equality

  /// Index of the wearer named by id or speaker label.
  std::optional<std::size_t> wearer_index(const std::string& id_or_label) const {
    for (std::size_t i = 0; i < wearers.size(); ++i) {
      if (wearers[i].decl.wearer_id == id_or_label) return i;
    }
    for (std::size_t i = 0; i < wearers.size(); ++i) {
      if (wearers[i].decl.speaker_label == id_or_label) return i;
    }
    return std::nullopt;
  }

  std::size_t require_wearer(const std::string& id_or_label) const {
    auto i = wearer_index(id_or_label);
    if (!i) throw Error("session " + manifest.session_id + " has no wearer " + id_or_label);
    return *i;
  }

  friend bool operator==(const Session& a, const Session& b) {
    return a.manifest == b.manifest && a.segments == b.segments && a.wearers == b.wearers &&
           a.truth == b.truth;
  }
};

struct WearerTimeline {
  std::string wearer_id;
  std::vector<std::uint8_t> on_face;
  std::vector<EmotionLabel> emotion;
  std::vector<std::uint32_t> gaze_samples;  // samples binned into each frame
  friend bool operator==(const WearerTimeline&, const WearerTimeline&) = default;
};

/// Both wearers' per-frame streams on one clock. Frame k covers
/// [k/fps, (k+1)/fps) seconds.
struct FrameTimeline {
  double fps = 30.0;
  std::size_t n_frames = 0;
  std::array<WearerTimeline, 2> wearers;

  std::size_t index_of(const std::string& wearer_id) const {
    for (std::size_t i = 0; i < wearers.size(); ++i) {
      if (wearers[i].wearer_id == wearer_id) return i;
    }
    throw Error("timeline has no wearer " + wearer_id);
  }
  friend bool operator==(const FrameTimeline&, const FrameTimeline&) = default;
};

}  // namespace engage::core
