#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "engage/core/textio.hpp"
#include "engage/core/timeline.hpp"
#include "engage/core/types.hpp"
#include "engage/features/windows.hpp"

namespace engage::fusion {

using features::EmotionLabel;
using features::FrameWindow;

/// What one wearer did during a turn, as rendered in the transcript.
struct TurnCue {
  double gaze_fraction = 0.0;
  int gaze_decile = 0;  // percent, multiple of 10
  EmotionLabel emotion = EmotionLabel::neutral;
  friend bool operator==(const TurnCue&, const TurnCue&) = default;
};

/// Maximal run of same-speaker segments.
struct Turn {
  std::string speaker;        // wearer id
  std::string speaker_label;  // transcript label
  double start = 0.0;
  double end = 0.0;
  std::string text;
  FrameWindow frames;
  std::array<TurnCue, 2> cues;  // indexed like the session's wearers
  friend bool operator==(const Turn&, const Turn&) = default;
};

inline core::TranscriptSegment to_segment(const Turn& t) {
  return {t.start, t.end, t.speaker_label, t.text, t.speaker};
}

/// Joins consecutive same-speaker segments with a single space. Input must be
/// sorted by start.
inline std::vector<Turn> merge_segments(std::span<const core::TranscriptSegment> segments) {
  std::vector<Turn> turns;
  for (const auto& seg : segments) {
    const std::string text(io::trim(seg.text));
    const std::string& speaker = seg.wearer_id.empty() ? seg.speaker_label : seg.wearer_id;
    if (!turns.empty() && turns.back().speaker == speaker) {
      auto& t = turns.back();
      if (!text.empty()) {
        if (!t.text.empty()) t.text += ' ';
        t.text += text;
      }
      t.start = std::min(t.start, seg.start);
      t.end = std::max(t.end, seg.end);
      continue;
    }
    Turn t;
    t.speaker = speaker;
    t.speaker_label = seg.speaker_label;
    t.start = seg.start;
    t.end = seg.end;
    t.text = text;
    turns.push_back(std::move(t));
  }
  return turns;
}

/// Fills each turn's frame window and per-wearer gaze/emotion cues from the
/// timeline, using the merged turn's full span.
inline void attach_cues(std::vector<Turn>& turns, const core::FrameTimeline& tl) {
  for (auto& t : turns) {
    auto [a, b] = core::frame_span(t.start, t.end, tl.fps);
    b = std::min(b, tl.n_frames);
    a = std::min(a, b > 0 ? b - 1 : 0);
    t.frames = {a, b};
    if (t.frames.size() == 0) continue;
    for (std::size_t w = 0; w < 2; ++w) {
      const auto& id = tl.wearers[w].wearer_id;
      t.cues[w].gaze_fraction = features::window_gaze_fraction(tl, id, t.frames);
      t.cues[w].gaze_decile = features::round_to_decile(t.cues[w].gaze_fraction);
      t.cues[w].emotion = features::dominant_emotion(tl, id, t.frames);
    }
  }
}

/// Drops every turn starting at or after conversation_start + budget_seconds.
inline std::vector<Turn> truncate_by_time(std::span<const Turn> turns, double conversation_start,
                                          double budget_seconds = 300.0) {
  std::vector<Turn> kept;
  for (const auto& t : turns) {
    if (t.start < conversation_start + budget_seconds) kept.push_back(t);
  }
  return kept;
}

}  // namespace engage::fusion
