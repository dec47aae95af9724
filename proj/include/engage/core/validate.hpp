#pragma once

#include <map>
#include <string>
#include <vector>

#include "engage/core/textio.hpp"
#include "engage/core/types.hpp"

namespace engage::core {

struct ValidationIssue {
  std::string code;  // "overlap", "gaze_gap", "response out of range", ...
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> warnings;
  std::vector<ValidationIssue> errors;
  bool ok() const { return errors.empty(); }
};

inline constexpr double kMaxGazeGapSeconds = 1.0;

inline ValidationReport validate_session(const Session& s) {
  ValidationReport rep;
  const auto& sid = s.manifest.session_id;

  if (s.segments.empty()) rep.warnings.push_back({"no_segments", sid + ": transcript is empty"});

  std::map<std::string, const TranscriptSegment*> last_by_speaker;
  for (const auto& seg : s.segments) {
    auto& prev = last_by_speaker[seg.speaker_label];
    if (prev && seg.start < prev->end) {
      rep.warnings.push_back({"overlap", sid + ": speaker " + seg.speaker_label + " segments overlap by " +
                                             io::format_fixed(prev->end - seg.start, 3) + " s at t=" +
                                             io::format_fixed(seg.start, 3)});
    }
    if (!prev || seg.end > prev->end) prev = &seg;
  }

  for (const auto& w : s.wearers) {
    for (std::size_t i = 1; i < w.gaze.size(); ++i) {
      const double gap = w.gaze[i].t - w.gaze[i - 1].t;
      if (gap > kMaxGazeGapSeconds) {
        rep.warnings.push_back({"gaze_gap", sid + ": wearer " + w.decl.wearer_id + " gaze gap of " +
                                                io::format_fixed(gap, 3) + " s at t=" +
                                                io::format_fixed(w.gaze[i - 1].t, 3)});
      }
    }
    for (const auto& au : w.aus) {
      for (const auto& [id, v] : au.intensity) {
        if (v < 0.0 || v > 5.0) {
          rep.errors.push_back({"au intensity out of range",
                                sid + ": wearer " + w.decl.wearer_id + " frame " +
                                    std::to_string(au.frame) + " " + id + "=" + io::format_double(v)});
        }
      }
    }
    std::size_t degenerate = 0;
    for (const auto& lm : w.landmarks) {
      if (!lm.detected) continue;
      try {
        (void)features::convex_hull(lm.points);
      } catch (const DegenerateInput&) {
        ++degenerate;
      }
    }
    if (degenerate > 0) {
      rep.warnings.push_back({"degenerate_landmarks", sid + ": wearer " + w.decl.wearer_id + " has " +
                                                          std::to_string(degenerate) +
                                                          " collinear landmark frames"});
    }
  }

  if (s.truth) {
    for (const auto& [key, v] : s.truth->responses) {
      if (v < 1 || v > 7) {
        rep.errors.push_back({"response out of range", sid + ": wearer " + key.first + " item " +
                                                           key.second + " response " + std::to_string(v) +
                                                           " outside [1,7]"});
      }
      if (!s.wearer_index(key.first)) {
        rep.errors.push_back({"unknown wearer", sid + ": truth names unknown wearer " + key.first});
      }
    }
  }
  return rep;
}

}  // namespace engage::core
