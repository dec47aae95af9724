#pragma once

// Small hand-built sessions shared by the unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "engage/core/instrument.hpp"
#include "engage/core/types.hpp"

namespace engage::testkit {

inline std::vector<core::Point> face_outline(double cx, double cy, double radius) {
  std::vector<core::Point> pts;
  for (std::size_t i = 0; i < core::kLandmarkCount; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(core::kLandmarkCount);
    pts.push_back({std::round(cx + radius * std::cos(a)), std::round(cy + radius * std::sin(a))});
  }
  return pts;
}

inline core::WearerDecl decl(const std::string& id, const std::string& name, const std::string& label, char tag) {
  const std::string s(1, tag);
  return {id, name, label, "gaze_" + s + ".csv", "landmarks_" + s + ".jsonl", "aus_" + s + ".jsonl",
          "persona_" + s + ".json"};
}

/// Per-frame gaze: one sample at each frame centre, on the face for frames
/// where `on(frame)` holds.
template <typename On>
std::vector<core::GazeSample> frame_gaze(std::size_t frames, double fps, On on) {
  std::vector<core::GazeSample> g;
  for (std::size_t k = 0; k < frames; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / fps;
    if (on(k)) g.push_back({t, 500.0, 400.0});
    else g.push_back({t, 20.0, 20.0});
  }
  return g;
}

inline core::AuFrame smile(std::int64_t frame) {
  core::AuFrame a;
  a.frame = frame;
  a.intensity = {{"AU06", 2.5}, {"AU12", 3.0}};
  return a;
}

/// Two-turn greeting between Alice and Bob at 10 frames per second. From
/// Alice's side: she looks at Bob 80% of her own turn and 60% of his, and
/// smiles throughout; Bob looks at her 80% of the time and smiles only while
/// he speaks.
inline core::Session greeting_session() {
  core::Session s;
  auto& m = s.manifest;
  m.session_id = "greeting";
  m.dyad_id = "d-greeting";
  m.fps = 10.0;
  m.conversation_start = 0.0;
  m.transcript_file = "transcript.jsonl";
  m.truth_file = "truth.json";
  m.wearers = {decl("alice", "Alice", "SPEAKER_00", 'a'), decl("bob", "Bob", "SPEAKER_01", 'b')};

  s.segments = {{0.0, 2.0, "SPEAKER_00", "Hi, I'm Alice! What year are you?", "alice"},
                {2.0, 4.0, "SPEAKER_01", "Hi Alice, I'm Bob. I'm a sophomore.", "bob"}};

  constexpr std::size_t kFrames = 40;
  for (std::size_t w = 0; w < 2; ++w) {
    auto& ws = s.wearers[w];
    ws.decl = m.wearers[w];
    for (std::size_t k = 0; k < kFrames; ++k) {
      ws.landmarks.push_back({static_cast<std::int64_t>(k), true, face_outline(500.0, 400.0, 100.0)});
    }
  }
  // Alice: frames 0-15 of her turn on (16/20), frames 20-31 of Bob's on (12/20).
  s.wearers[0].gaze = frame_gaze(kFrames, m.fps, [](std::size_t k) { return k < 16 || (k >= 20 && k < 32); });
  s.wearers[1].gaze = frame_gaze(kFrames, m.fps, [](std::size_t k) { return (k % 20) < 16; });
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(kFrames); ++k) s.wearers[0].aus.push_back(smile(k));
  for (std::int64_t k = 20; k < static_cast<std::int64_t>(kFrames); ++k) s.wearers[1].aus.push_back(smile(k));

  auto persona = [](const std::string& affiliation, int shift) {
    core::PersonaProfile p;
    p.affiliation = affiliation;
    const auto& bfi = core::big_five_statements();
    for (std::size_t i = 0; i < 4; ++i) p.big_five.push_back({bfi[i], 1 + static_cast<int>((i * 2 + shift) % 5)});
    const auto& topics = core::belief_topics();
    for (std::size_t i = 0; i < 2; ++i) {
      p.beliefs.push_back({topics[i].topic, topics[i].options[(i + shift) % topics[i].options.size()]});
    }
    return p;
  };
  s.wearers[0].persona = persona("a student at Stanford University", 3);
  s.wearers[1].persona = persona("a student at Stanford University", 1);

  core::EngagementTruth truth;
  truth.items = core::engagement_items();
  for (std::size_t i = 0; i < truth.items.size(); ++i) {
    truth.responses[{"alice", truth.items[i].item_id}] = 1 + static_cast<int>((i + 4) % 7);
    truth.responses[{"bob", truth.items[i].item_id}] = 1 + static_cast<int>((i * 3) % 7);
  }
  s.truth = std::move(truth);
  return s;
}

}  // namespace engage::testkit
