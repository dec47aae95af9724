#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <filesystem>
#include <string>
#include <vector>

#include "engage/baselines/features.hpp"
#include "engage/core/instrument.hpp"
#include "engage/core/session_io.hpp"
#include "engage/core/timeline.hpp"
#include "engage/fusion/turns.hpp"
#include "engage/synth/rng.hpp"

namespace engage::synth {

struct SynthParams {
  std::size_t n_dyads = 20;
  std::uint64_t seed = 42;
  /// Planted engagement per wearer (two per dyad, in order). Sampled
  /// uniformly from [0,1] where not given.
  std::vector<double> engagement;
  int min_turns = 50;
  int max_turns = 70;
  double min_turn_seconds = 2.0;
  double max_turn_seconds = 7.0;
  double same_speaker_rate = 0.1;  // chance the next turn keeps the speaker
  std::size_t embedding_dim = 16;
  double gaze_noise = 0.1;         // sd of the per-turn on-face fraction
  double truth_noise = 0.8;        // sd of per-response rating noise
  double item_bias_sd = 0.5;
  double embedding_noise = 1.0;
  double embedding_signal = 3.0;   // length of the engagement direction
  double landmark_dropout = 0.05;
  double fps = 30.0;
  double gaze_hz = 120.0;

  void check() const {
    if (n_dyads < 1) throw Error("n_dyads must be >= 1");
    for (double t : engagement) {
      if (!(t >= 0.0 && t <= 1.0)) throw Error("engagement values must lie in [0,1]");
    }
    if (min_turns < 2 || max_turns < min_turns) throw Error("turn count range is invalid");
    if (!(min_turn_seconds > 0.0) || max_turn_seconds < min_turn_seconds) throw Error("turn length range is invalid");
    if (embedding_dim < 1) throw Error("embedding_dim must be >= 1");
  }
};

struct GeneratedSession {
  core::Session session;
  baselines::EmbeddingTable embeddings;
  std::array<double, 2> engagement{};
};

namespace detail {

inline const std::array<const char*, 12> kEngagedPhrases = {
    "That is fascinating, tell me more!",
    "I really love that idea.",
    "Oh wow, I had the exact same experience!",
    "That's such a great point.",
    "I'm curious, how did that turn out?",
    "Yes, absolutely, I totally agree!",
    "That sounds amazing, what happened next?",
    "Ha, I love that story.",
    "I've been thinking about that a lot too!",
    "Really interesting, I never thought of it that way.",
    "Honestly that's exciting to hear.",
    "Tell me everything, I want to know!"};

inline const std::array<const char*, 12> kFlatPhrases = {
    "Okay.",
    "Sure, I guess.",
    "Hmm, not sure.",
    "Yeah, whatever works.",
    "I don't know, maybe.",
    "Fine.",
    "Right, okay.",
    "I guess so.",
    "Not really my thing.",
    "Uh, yeah.",
    "Mm, could be.",
    "I suppose."};

inline const std::array<const char*, 10> kNames = {"Alex", "Jordan", "Sam", "Riley", "Casey",
                                                   "Morgan", "Taylor", "Jamie", "Avery", "Quinn"};

inline const std::array<const char*, 4> kAffiliations = {"a student at a university", "a graduate student",
                                                         "an undergraduate student", "a university staff member"};

struct EmotionAus {
  features::EmotionLabel label;
  std::vector<const char*> aus;
};

inline const std::vector<EmotionAus>& emotion_aus() {
  using features::EmotionLabel;
  static const std::vector<EmotionAus> v = {
      {EmotionLabel::happy, {"AU06", "AU12"}},
      {EmotionLabel::surprise, {"AU01", "AU02", "AU05", "AU26"}},
      {EmotionLabel::sad, {"AU01", "AU04", "AU15"}},
      {EmotionLabel::fear, {"AU01", "AU02", "AU04", "AU05", "AU07", "AU20", "AU26"}},
      {EmotionLabel::anger, {"AU04", "AU05", "AU07", "AU23"}},
      {EmotionLabel::disgust, {"AU09", "AU15"}},
      {EmotionLabel::contempt, {"AU14"}},
  };
  return v;
}

/// Rounds to a multiple of `step`, which must be 1/n for integer n; dividing
/// by n keeps the written decimals short.
inline double round_to(double v, double step) {
  const double n = std::round(1.0 / step);
  return std::round(v * n) / n;
}

/// Centre of the partner's face in this wearer's scene camera at time t.
inline features::Point face_centre(double t, double phase) {
  return {640.0 + 40.0 * std::sin(0.1 * t + phase), 360.0 + 20.0 * std::cos(0.13 * t + phase)};
}

inline constexpr double kFaceRx = 90.0;
inline constexpr double kFaceRy = 120.0;

struct PlannedTurn {
  std::size_t speaker = 0;
  double start = 0.0;
  double end = 0.0;
  std::array<double, 2> on_face{};  // per wearer
  std::array<features::EmotionLabel, 2> emotion{};
};

}  // namespace detail

/// Per-item rating offsets shared by every dyad of a dataset.
inline std::vector<double> item_biases(const SynthParams& p, std::size_t n_items) {
  Rng rng(p.seed, 0xB1A5ULL << 32);
  std::vector<double> b(n_items);
  for (auto& x : b) x = rng.normal(0.0, p.item_bias_sd);
  return b;
}

/// Direction along which engagement shifts the text embeddings.
inline std::vector<double> engagement_direction(const SynthParams& p) {
  Rng rng(p.seed, 0xD1CEULL << 32);
  std::vector<double> u(p.embedding_dim);
  double n = 0.0;
  for (auto& x : u) {
    x = rng.normal();
    n += x * x;
  }
  for (auto& x : u) x /= std::sqrt(n);
  return u;
}

inline double planted_engagement(const SynthParams& p, std::size_t dyad_index, std::size_t wearer) {
  const std::size_t k = 2 * dyad_index + wearer;
  if (k < p.engagement.size()) return p.engagement[k];
  Rng rng(p.seed, (0x7E7AULL << 32) + k);
  return rng.uniform();
}

/// Rating derived from engagement: clamp(round(1 + 6 theta + bias + noise)),
/// mirrored to 8 - r for negatively coded items.
inline int planted_rating(double theta, double bias, double noise, bool negatively_coded) {
  const int r = static_cast<int>(std::clamp(std::floor(1.0 + 6.0 * theta + bias + noise + 0.5), 1.0, 7.0));
  return negatively_coded ? 8 - r : r;
}

/// One complete session for dyad `dyad_index`; depends only on (params, dyad_index).
inline GeneratedSession generate_session(const SynthParams& p, std::size_t dyad_index) {
  p.check();
  using features::EmotionLabel;
  using features::Point;
  Rng rng(p.seed, dyad_index);
  GeneratedSession g;
  auto& s = g.session;

  char buf[32];
  std::snprintf(buf, sizeof buf, "%02zu", dyad_index + 1);
  const std::string tag = buf;
  s.manifest.session_id = "s" + tag;
  s.manifest.dyad_id = "d" + tag;
  s.manifest.transcript_file = "transcript.jsonl";
  s.manifest.truth_file = "truth.json";
  s.manifest.embedding_file = "embeddings.jsonl";
  s.manifest.fps = p.fps;
  s.manifest.conversation_start = detail::round_to(rng.uniform(2.0, 6.0), 0.01);

  static constexpr std::array<const char*, 2> kLabels = {"SPEAKER_00", "SPEAKER_01"};
  for (std::size_t w = 0; w < 2; ++w) {
    g.engagement[w] = planted_engagement(p, dyad_index, w);
    auto& d = s.manifest.wearers[w];
    std::snprintf(buf, sizeof buf, "P%03zu", 2 * dyad_index + w + 1);
    d.wearer_id = buf;
    d.display_name = detail::kNames[(2 * dyad_index + w) % detail::kNames.size()];
    d.speaker_label = kLabels[w];
    const std::string side = w == 0 ? "a" : "b";
    d.gaze_file = "gaze_" + side + ".csv";
    d.landmark_file = "landmarks_" + side + ".jsonl";
    d.au_file = "aus_" + side + ".jsonl";
    d.persona_file = "persona_" + side + ".json";
    s.wearers[w].decl = d;
  }

  // Turn plan.
  std::vector<detail::PlannedTurn> plan;
  const int n_turns = rng.integer(p.min_turns, p.max_turns);
  double t = s.manifest.conversation_start + rng.uniform(0.2, 1.0);
  std::size_t speaker = rng.integer(0, 1);
  for (int i = 0; i < n_turns; ++i) {
    if (i > 0 && !rng.bernoulli(p.same_speaker_rate)) speaker = 1 - speaker;
    detail::PlannedTurn pt;
    pt.speaker = speaker;
    pt.start = detail::round_to(t, 0.01);
    pt.end = detail::round_to(t + rng.uniform(p.min_turn_seconds, p.max_turn_seconds), 0.01);
    for (std::size_t w = 0; w < 2; ++w) {
      const double theta = g.engagement[w];
      pt.on_face[w] = std::clamp(rng.normal(0.3 + 0.6 * theta, p.gaze_noise), 0.0, 1.0);
      const double u = rng.uniform();
      if (u < 0.15 + 0.7 * theta) {
        pt.emotion[w] = EmotionLabel::happy;
      } else if (rng.bernoulli(0.6)) {
        pt.emotion[w] = EmotionLabel::neutral;
      } else {
        pt.emotion[w] = detail::emotion_aus()[static_cast<std::size_t>(rng.integer(1, 6))].label;
      }
    }
    plan.push_back(pt);
    t = pt.end + rng.uniform(0.1, 0.6);
  }
  const double end_time = plan.back().end + 1.0;

  // Transcript: each turn split into 1-3 segments.
  for (const auto& pt : plan) {
    const int pieces = rng.integer(1, 3);
    const double len = (pt.end - pt.start) / pieces;
    for (int k = 0; k < pieces; ++k) {
      core::TranscriptSegment seg;
      seg.start = detail::round_to(pt.start + k * len, 0.01);
      seg.end = k + 1 == pieces ? pt.end : detail::round_to(pt.start + (k + 1) * len, 0.01);
      if (seg.end <= seg.start) continue;
      seg.speaker_label = kLabels[pt.speaker];
      seg.wearer_id = s.manifest.wearers[pt.speaker].wearer_id;
      const bool engaged = rng.bernoulli(g.engagement[pt.speaker]);
      seg.text = engaged ? rng.pick(detail::kEngagedPhrases) : rng.pick(detail::kFlatPhrases);
      s.segments.push_back(std::move(seg));
    }
  }

  for (std::size_t w = 0; w < 2; ++w) {
    auto& ws = s.wearers[w];
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

    // Partner's face outline, once per second.
    const auto n_seconds = static_cast<std::int64_t>(std::ceil(end_time));
    for (std::int64_t sec = 0; sec <= n_seconds; ++sec) {
      core::LandmarkFrame f;
      f.frame = static_cast<std::int64_t>(std::llround(static_cast<double>(sec) * p.fps));
      f.detected = sec == 0 || !rng.bernoulli(p.landmark_dropout);
      if (f.detected) {
        const auto c = detail::face_centre(static_cast<double>(sec), phase);
        f.points.reserve(core::kLandmarkCount);
        for (std::size_t k = 0; k < core::kLandmarkCount; ++k) {
          const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(core::kLandmarkCount);
          const double r = k % 4 == 0 ? 1.0 : rng.uniform(0.2, 0.95);
          f.points.push_back({std::round(c.x + r * detail::kFaceRx * std::cos(ang)),
                              std::round(c.y + r * detail::kFaceRy * std::sin(ang))});
        }
      }
      ws.landmarks.push_back(std::move(f));
    }

    // Gaze at 120 Hz; each video frame is on- or off-face as a whole.
    const double mean_rate = std::clamp(0.3 + 0.6 * g.engagement[w], 0.0, 1.0);
    const double per_frame = p.gaze_hz / p.fps;
    const auto n_frames = static_cast<std::int64_t>(std::ceil(end_time * p.fps));
    std::size_t ti = 0;
    for (std::int64_t fr = 0; fr < n_frames; ++fr) {
      const double ft = static_cast<double>(fr) / p.fps;
      while (ti < plan.size() && plan[ti].end <= ft) ++ti;
      const bool in_turn = ti < plan.size() && plan[ti].start <= ft;
      const bool on = rng.bernoulli(in_turn ? plan[ti].on_face[w] : mean_rate);
      const double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double dist = on ? rng.uniform(0.0, 0.4) : rng.uniform(1.2, 1.8);
      for (int k = 0; k < static_cast<int>(per_frame); ++k) {
        const double st = (static_cast<double>(fr) * per_frame + k + 0.5) / p.gaze_hz;
        const auto c = detail::face_centre(st, phase);
        const double scale = on ? detail::kFaceRx : 2.0 * detail::kFaceRx;
        ws.gaze.push_back({detail::round_to(st, 1e-5), detail::round_to(c.x + dist * scale * std::cos(ang) + rng.normal(0, 1.0), 0.1),
                           detail::round_to(c.y + dist * scale * std::sin(ang) + rng.normal(0, 1.0), 0.1)});
      }
    }

    // Own facial action units: only frames showing a non-neutral expression.
    for (const auto& pt : plan) {
      const auto label = pt.emotion[w];
      if (label == EmotionLabel::neutral) continue;
      const auto& set = *std::find_if(detail::emotion_aus().begin(), detail::emotion_aus().end(),
                                      [&](const detail::EmotionAus& e) { return e.label == label; });
      const auto [a, b] = core::frame_span(pt.start, pt.end, p.fps);
      for (std::size_t fr = a; fr < b; ++fr) {
        if (rng.bernoulli(0.1)) continue;  // brief relaxations
        features::AuFrame au;
        au.frame = static_cast<std::int64_t>(fr);
        for (const char* id : set.aus) au.intensity[id] = detail::round_to(rng.uniform(1.5, 3.5), 0.01);
        ws.aus.push_back(std::move(au));
      }
    }

    // Persona.
    auto& persona = ws.persona;
    persona.affiliation = rng.pick(detail::kAffiliations);
    for (const auto& st : core::big_five_statements()) persona.big_five.push_back({st, rng.integer(1, 5)});
    for (const auto& topic : core::belief_topics()) {
      persona.beliefs.push_back({topic.topic, rng.pick(topic.options)});
    }
  }
  // Planted questionnaire answers.
  const auto& items = core::engagement_items();
  const auto bias = item_biases(p, items.size());
  core::EngagementTruth truth;
  truth.items = items;
  for (std::size_t w = 0; w < 2; ++w) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      truth.responses[{s.manifest.wearers[w].wearer_id, items[i].item_id}] =
          planted_rating(g.engagement[w], bias[i], rng.normal(0.0, p.truth_noise), items[i].negatively_coded);
    }
  }
  s.truth = std::move(truth);

  // Text embeddings for every merged turn.
  const auto dir = engagement_direction(p);
  const auto turns = fusion::merge_segments(s.segments);
  g.embeddings.dim = p.embedding_dim;
  std::array<std::vector<double>, 2> base;
  for (std::size_t w = 0; w < 2; ++w) {
    base[w].resize(p.embedding_dim);
    for (auto& x : base[w]) x = 0.5 * rng.normal();
  }
  for (std::size_t ti2 = 0; ti2 < turns.size(); ++ti2) {
    const std::size_t w = turns[ti2].speaker == s.manifest.wearers[0].wearer_id ? 0 : 1;
    std::vector<double> v(p.embedding_dim);
    for (std::size_t k = 0; k < v.size(); ++k) {
      v[k] = detail::round_to(base[w][k] + p.embedding_signal * g.engagement[w] * dir[k] +
                                  rng.normal(0.0, p.embedding_noise),
                              1e-4);
    }
    g.embeddings.vectors[{s.manifest.session_id, turns[ti2].speaker, ti2}] = std::move(v);
  }
  return g;
}

/// Writes the session's files plus its embedding file under `dir`.
inline void write_generated(const GeneratedSession& g, const std::filesystem::path& dir) {
  core::write_session(g.session, dir);
  io::write_file(dir / *g.session.manifest.embedding_file, baselines::embeddings_to_text(g.embeddings));
}

}  // namespace engage::synth
