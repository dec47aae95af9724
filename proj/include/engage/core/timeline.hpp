#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "engage/core/types.hpp"
#include "engage/features/emotion.hpp"
#include "engage/features/geometry.hpp"

namespace engage::core {

/// Frame holding time t under half-open windows [k/fps, (k+1)/fps). The
/// boundaries are the doubles k/fps, so a sample stamped exactly k/fps lands
/// in frame k regardless of rounding in t*fps.
inline std::int64_t frame_of(double t, double fps) {
  auto k = static_cast<std::int64_t>(std::floor(t * fps));
  if (static_cast<double>(k + 1) / fps <= t) ++k;
  if (static_cast<double>(k) / fps > t) --k;
  return k;
}

/// Frame window [a, b) covering the time span [start, end); never empty.
inline std::pair<std::size_t, std::size_t> frame_span(double start, double end, double fps) {
  const auto a = std::max<std::int64_t>(0, frame_of(start, fps));
  auto b = frame_of(end, fps);
  if (static_cast<double>(b) / fps < end) ++b;  // end is exclusive; keep a partial last frame
  b = std::max(b, a + 1);
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

struct SyncOptions {
  double margin_ratio = 0.3;
  const features::EmotionTable* emotion_table = nullptr;  // null: built-in table
};

/// Puts both wearers' gaze, face-outline and AU streams on one frame index.
/// A frame is on-face when at least half of its gaze samples hit the
/// partner's face outline. Frames without a detected outline reuse the most
/// recent detected one; before the first detection nothing is on-face.
inline FrameTimeline synchronize_timeline(const Session& session, const SyncOptions& opt = {}) {
  const double fps = session.manifest.fps;
  if (!(fps > 0.0)) throw Error("fps must be positive");
  const auto& table = opt.emotion_table ? *opt.emotion_table : features::EmotionTable::builtin();

  std::int64_t last = 0;
  for (const auto& w : session.wearers) {
    if (w.gaze.empty()) throw EmptyStream("wearer " + w.decl.wearer_id + " has no gaze samples");
    last = std::max(last, frame_of(w.gaze.back().t, fps));
    if (!w.landmarks.empty()) last = std::max(last, w.landmarks.back().frame);
    if (!w.aus.empty()) last = std::max(last, w.aus.back().frame);
  }
  for (const auto& seg : session.segments) {
    last = std::max<std::int64_t>(last, static_cast<std::int64_t>(frame_span(seg.start, seg.end, fps).second) - 1);
  }

  FrameTimeline tl;
  tl.fps = fps;
  tl.n_frames = static_cast<std::size_t>(last + 1);

  for (std::size_t wi = 0; wi < 2; ++wi) {
    const auto& w = session.wearers[wi];
    auto& out = tl.wearers[wi];
    out.wearer_id = w.decl.wearer_id;
    out.on_face.assign(tl.n_frames, 0);
    out.emotion.assign(tl.n_frames, features::EmotionLabel::neutral);
    out.gaze_samples.assign(tl.n_frames, 0);
    std::vector<std::uint32_t> hits(tl.n_frames, 0);

    std::optional<features::Hull> hull;
    std::size_t li = 0;
    std::size_t gi = 0;
    for (std::size_t k = 0; k < tl.n_frames; ++k) {
      const auto frame = static_cast<std::int64_t>(k);
      while (li < w.landmarks.size() && w.landmarks[li].frame < frame) ++li;
      if (li < w.landmarks.size() && w.landmarks[li].frame == frame && w.landmarks[li].detected) {
        try {
          hull = features::convex_hull(w.landmarks[li].points);
        } catch (const DegenerateInput&) {
          // unusable outline: same as no detection
        }
      }
      while (gi < w.gaze.size() && frame_of(w.gaze[gi].t, fps) < frame) ++gi;
      while (gi < w.gaze.size() && frame_of(w.gaze[gi].t, fps) == frame) {
        ++out.gaze_samples[k];
        if (hull && features::gaze_on_face({w.gaze[gi].x, w.gaze[gi].y}, *hull, opt.margin_ratio)) {
          ++hits[k];
        }
        ++gi;
      }
      out.on_face[k] = out.gaze_samples[k] > 0 && 2 * hits[k] >= out.gaze_samples[k];
    }

    for (const auto& au : w.aus) {
      if (au.frame >= 0 && static_cast<std::size_t>(au.frame) < tl.n_frames) {
        out.emotion[static_cast<std::size_t>(au.frame)] = features::classify_emotion_frame(au, table);
      }
    }
  }
  return tl;
}

}  // namespace engage::core
