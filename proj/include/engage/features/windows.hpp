#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "engage/core/types.hpp"
#include "engage/features/emotion.hpp"

namespace engage::features {

struct FrameWindow {
  std::size_t begin = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::size_t size() const { return end - begin; }
  friend bool operator==(const FrameWindow&, const FrameWindow&) = default;
};

namespace detail {
inline const core::WearerTimeline& checked(const core::FrameTimeline& tl, const std::string& wearer,
                                           FrameWindow w) {
  if (w.begin == w.end) throw EmptyWindow();
  if (w.begin > w.end || w.end > tl.n_frames) {
    throw std::out_of_range("frame window [" + std::to_string(w.begin) + "," + std::to_string(w.end) +
                            ") outside timeline of " + std::to_string(tl.n_frames) + " frames");
  }
  return tl.wearers[tl.index_of(wearer)];
}
}  // namespace detail

/// Fraction of frames in the window where the wearer looks at the partner's face.
inline double window_gaze_fraction(const core::FrameTimeline& tl, const std::string& wearer, FrameWindow w) {
  const auto& wt = detail::checked(tl, wearer, w);
  std::size_t on = 0;
  for (std::size_t k = w.begin; k < w.end; ++k) on += wt.on_face[k] ? 1 : 0;
  return static_cast<double>(on) / static_cast<double>(w.size());
}

/// Nearest multiple of 10 percent, halves rounded up (0.85 -> 90).
inline int round_to_decile(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::domain_error("fraction outside [0,1]");
  }
  // The epsilon absorbs binary representation error at exact halves.
  return static_cast<int>(std::floor(fraction * 10.0 + 0.5 + 1e-9)) * 10;
}

inline EmotionLabel dominant_emotion(const core::FrameTimeline& tl, const std::string& wearer, FrameWindow w) {
  const auto& wt = detail::checked(tl, wearer, w);
  return modal_emotion(std::span<const EmotionLabel>(wt.emotion).subspan(w.begin, w.size()));
}

}  // namespace engage::features
