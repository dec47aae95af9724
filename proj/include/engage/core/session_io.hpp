#pragma once

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "engage/core/textio.hpp"
#include "engage/core/types.hpp"

namespace engage::core {

namespace fs = std::filesystem;
using nlohmann::json;

namespace detail {

inline void require_exists(const fs::path& p) {
  if (!fs::exists(p)) throw MissingFile(p.string());
}

/// Field access with schema errors that name the file, line and field.
class RecordReader {
 public:
  RecordReader(const json& j, std::string file, std::size_t line)
      : j_(j), file_(std::move(file)), line_(line) {}

  const json& at(const char* field) const {
    if (!j_.is_object() || !j_.contains(field)) fail(field, "missing");
    return j_.at(field);
  }
  bool has(const char* field) const { return j_.is_object() && j_.contains(field); }

  double number(const char* field) const {
    const auto& v = at(field);
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
  }
  std::int64_t integer(const char* field) const {
    const auto& v = at(field);
    if (!v.is_number_integer()) fail(field, "expected an integer");
    return v.get<std::int64_t>();
  }
  std::string string(const char* field) const {
    const auto& v = at(field);
    if (!v.is_string()) fail(field, "expected a string");
    return v.get<std::string>();
  }
  bool boolean(const char* field) const {
    const auto& v = at(field);
    if (!v.is_boolean()) fail(field, "expected a boolean");
    return v.get<bool>();
  }
  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw SchemaViolation(file_, line_, field, what);
  }

 private:
  const json& j_;
  std::string file_;
  std::size_t line_;
};

inline json parse_document(const fs::path& path) {
  require_exists(path);
  const std::string text = io::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaViolation(path.string(), 1, "<document>", e.what());
  }
}

/// Calls fn(record, line_number) for every non-blank line of a JSONL file.
template <typename Fn>
void for_each_record(const fs::path& path, Fn&& fn) {
  require_exists(path);
  const std::string text = io::read_file(path);
  std::size_t line_no = 0;
  for (auto line : io::split_lines(text)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaViolation(path.string(), line_no, "<record>", e.what());
    }
    fn(RecordReader(j, path.string(), line_no), line_no);
  }
}

}  // namespace detail

inline std::vector<TranscriptSegment> load_transcript(const fs::path& path) {
  std::vector<TranscriptSegment> segs;
  detail::for_each_record(path, [&](const detail::RecordReader& r, std::size_t) {
    TranscriptSegment s;
    s.start = r.number("start");
    s.end = r.number("end");
    s.speaker_label = r.string("speaker");
    s.text = r.string("text");
    if (!(s.start < s.end)) r.fail("end", "segment must satisfy start < end");
    if (io::trim(s.text).empty()) r.fail("text", "empty after trimming");
    segs.push_back(std::move(s));
  });
  std::stable_sort(segs.begin(), segs.end(),
                   [](const auto& a, const auto& b) { return a.start < b.start; });
  return segs;
}

inline std::vector<GazeSample> load_gaze(const fs::path& path) {
  detail::require_exists(path);
  const std::string text = io::read_file(path);
  const auto lines = io::split_lines(text);
  const std::string file = path.string();
  if (lines.empty() || io::trim(lines[0]) != "t,x,y") {
    throw SchemaViolation(file, 1, "<header>", "expected header 't,x,y'");
  }
  std::vector<GazeSample> out;
  out.reserve(lines.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = io::trim(lines[i]);
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw SchemaViolation(file, i + 1, "<row>", "expected 3 comma-separated values");
    }
    auto t = io::parse_double(line.substr(0, c1));
    auto x = io::parse_double(line.substr(c1 + 1, c2 - c1 - 1));
    auto y = io::parse_double(line.substr(c2 + 1));
    if (!t) throw SchemaViolation(file, i + 1, "t", "not a number");
    if (!x) throw SchemaViolation(file, i + 1, "x", "not a number");
    if (!y) throw SchemaViolation(file, i + 1, "y", "not a number");
    if (!out.empty() && *t < out.back().t) {
      throw SchemaViolation(file, i + 1, "t", "timestamps must be non-decreasing");
    }
    out.push_back({*t, *x, *y});
  }
  return out;
}

inline std::vector<LandmarkFrame> load_landmarks(const fs::path& path) {
  std::vector<LandmarkFrame> out;
  detail::for_each_record(path, [&](const detail::RecordReader& r, std::size_t) {
    LandmarkFrame f;
    f.frame = r.integer("frame");
    f.detected = r.boolean("detected");
    if (r.has("points")) {
      const auto& pts = r.at("points");
      if (!pts.is_array()) r.fail("points", "expected an array");
      f.points.reserve(pts.size());
      for (const auto& p : pts) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
          r.fail("points", "each point must be [x, y]");
        }
        f.points.push_back({p[0].get<double>(), p[1].get<double>()});
      }
    }
    if (f.detected && f.points.size() != kLandmarkCount) {
      r.fail("points", "detected frames need exactly 478 points, got " +
                           std::to_string(f.points.size()));
    }
    out.push_back(std::move(f));
  });
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.frame < b.frame; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].frame == out[i - 1].frame) {
      throw SchemaViolation(path.string(), 0, "frame",
                            "duplicate frame " + std::to_string(out[i].frame));
    }
  }
  return out;
}

inline std::vector<AuFrame> load_aus(const fs::path& path) {
  std::vector<AuFrame> out;
  detail::for_each_record(path, [&](const detail::RecordReader& r, std::size_t) {
    AuFrame f;
    f.frame = r.integer("frame");
    if (r.has("au")) {
      const auto& au = r.at("au");
      if (!au.is_object()) r.fail("au", "expected an object");
      for (const auto& [k, v] : au.items()) {
        if (!v.is_number()) r.fail("au." + k, "expected a number");
        f.intensity[k] = v.get<double>();
      }
    }
    if (r.has("presence")) {
      const auto& pr = r.at("presence");
      if (!pr.is_object()) r.fail("presence", "expected an object");
      for (const auto& [k, v] : pr.items()) {
        if (!v.is_boolean()) r.fail("presence." + k, "expected a boolean");
        f.presence[k] = v.get<bool>();
      }
    }
    if (r.has("emotion")) {
      auto e = features::parse_emotion(r.string("emotion"));
      if (!e) r.fail("emotion", "unknown emotion label");
      f.label = e;
    }
    out.push_back(std::move(f));
  });
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.frame < b.frame; });
  return out;
}

inline PersonaProfile load_persona(const fs::path& path) {
  const json j = detail::parse_document(path);
  const detail::RecordReader r(j, path.string(), 1);
  PersonaProfile p;
  p.affiliation = r.string("affiliation");
  for (const auto& b : r.at("big_five")) {
    const detail::RecordReader br(b, path.string(), 1);
    BigFiveAnswer a{br.string("statement"), static_cast<int>(br.integer("score"))};
    if (a.score < 1 || a.score > 5) br.fail("big_five.score", "must be in [1,5]");
    p.big_five.push_back(std::move(a));
  }
  for (const auto& b : r.at("beliefs")) {
    const detail::RecordReader br(b, path.string(), 1);
    p.beliefs.push_back({br.string("topic"), br.string("selected_statement")});
  }
  return p;
}

inline EngagementTruth load_truth(const fs::path& path) {
  const json j = detail::parse_document(path);
  const detail::RecordReader r(j, path.string(), 1);
  EngagementTruth t;
  for (const auto& it : r.at("items")) {
    const detail::RecordReader ir(it, path.string(), 1);
    t.items.push_back({ir.string("item_id"), ir.string("statement"),
                       ir.has("negatively_coded") ? ir.boolean("negatively_coded") : false});
  }
  const auto& responses = r.at("responses");
  if (!responses.is_object()) r.fail("responses", "expected an object keyed by wearer id");
  for (const auto& [wearer, per_item] : responses.items()) {
    for (const auto& [item, v] : per_item.items()) {
      if (!v.is_number_integer()) r.fail("responses." + wearer + "." + item, "expected an integer");
      t.responses[{wearer, item}] = v.get<int>();
    }
  }
  return t;
}

inline SessionManifest parse_manifest(const json& j, const std::string& file) {
  const detail::RecordReader r(j, file, 1);
  SessionManifest m;
  m.session_id = r.string("session_id");
  m.dyad_id = r.string("dyad_id");
  const auto& ws = r.at("wearers");
  if (!ws.is_array() || ws.size() != 2) r.fail("wearers", "exactly 2 wearers required");
  for (std::size_t i = 0; i < 2; ++i) {
    const detail::RecordReader wr(ws[i], file, 1);
    m.wearers[i] = {wr.string("wearer_id"),    wr.string("display_name"),
                    wr.string("speaker_label"), wr.string("gaze_file"),
                    wr.string("landmark_file"), wr.string("au_file"),
                    wr.string("persona_file")};
  }
  if (m.wearers[0].speaker_label == m.wearers[1].speaker_label) {
    r.fail("wearers.speaker_label", "speaker labels must be distinct");
  }
  if (m.wearers[0].wearer_id == m.wearers[1].wearer_id) {
    r.fail("wearers.wearer_id", "wearer ids must be distinct");
  }
  m.transcript_file = r.string("transcript_file");
  if (r.has("truth_file") && !r.at("truth_file").is_null()) m.truth_file = r.string("truth_file");
  if (r.has("embedding_file") && !r.at("embedding_file").is_null()) {
    m.embedding_file = r.string("embedding_file");
  }
  m.conversation_start = r.has("conversation_start") ? r.number("conversation_start") : 0.0;
  m.fps = r.has("fps") ? r.number("fps") : 30.0;
  if (!(m.fps > 0.0)) r.fail("fps", "must be positive");
  return m;
}

inline json manifest_to_json(const SessionManifest& m) {
  json j;
  j["session_id"] = m.session_id;
  j["dyad_id"] = m.dyad_id;
  j["wearers"] = json::array();
  for (const auto& w : m.wearers) {
    j["wearers"].push_back({{"wearer_id", w.wearer_id},
                            {"display_name", w.display_name},
                            {"speaker_label", w.speaker_label},
                            {"gaze_file", w.gaze_file},
                            {"landmark_file", w.landmark_file},
                            {"au_file", w.au_file},
                            {"persona_file", w.persona_file}});
  }
  j["transcript_file"] = m.transcript_file;
  if (m.truth_file) j["truth_file"] = *m.truth_file;
  if (m.embedding_file) j["embedding_file"] = *m.embedding_file;
  j["conversation_start"] = m.conversation_start;
  j["fps"] = m.fps;
  return j;
}

/// Accepts either a manifest file or a session directory containing manifest.json.
inline Session load_session(const fs::path& manifest_path) {
  fs::path mpath = manifest_path;
  if (fs::is_directory(mpath)) mpath /= "manifest.json";
  const json j = detail::parse_document(mpath);

  Session s;
  s.directory = mpath.parent_path();
  s.manifest = parse_manifest(j, mpath.string());
  const auto& dir = s.directory;

  // Existence first so a missing file is reported before any parse error.
  detail::require_exists(dir / s.manifest.transcript_file);
  for (const auto& w : s.manifest.wearers) {
    for (const auto* f : {&w.gaze_file, &w.landmark_file, &w.au_file, &w.persona_file}) {
      detail::require_exists(dir / *f);
    }
  }
  if (s.manifest.truth_file) detail::require_exists(dir / *s.manifest.truth_file);
  if (s.manifest.embedding_file) detail::require_exists(dir / *s.manifest.embedding_file);

  s.segments = load_transcript(dir / s.manifest.transcript_file);
  for (auto& seg : s.segments) {
    bool found = false;
    for (const auto& w : s.manifest.wearers) {
      if (w.speaker_label == seg.speaker_label) {
        seg.wearer_id = w.wearer_id;
        found = true;
      }
    }
    if (!found) throw UnknownSpeakerLabel(seg.speaker_label);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& w = s.manifest.wearers[i];
    auto& ws = s.wearers[i];
    ws.decl = w;
    ws.gaze = load_gaze(dir / w.gaze_file);
    ws.landmarks = load_landmarks(dir / w.landmark_file);
    ws.aus = load_aus(dir / w.au_file);
    ws.persona = load_persona(dir / w.persona_file);
  }
  if (s.manifest.truth_file) s.truth = load_truth(dir / *s.manifest.truth_file);
  return s;
}

// ---- writers --------------------------------------------------------------

inline std::string transcript_to_jsonl(const std::vector<TranscriptSegment>& segs) {
  std::string out;
  for (const auto& s : segs) {
    json j{{"start", s.start}, {"end", s.end}, {"speaker", s.speaker_label}, {"text", s.text}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::string gaze_to_csv(const std::vector<GazeSample>& gaze) {
  std::string out = "t,x,y\n";
  for (const auto& g : gaze) {
    out += io::format_double(g.t);
    out += ',';
    out += io::format_double(g.x);
    out += ',';
    out += io::format_double(g.y);
    out += '\n';
  }
  return out;
}

inline std::string landmarks_to_jsonl(const std::vector<LandmarkFrame>& frames) {
  std::string out;
  for (const auto& f : frames) {
    json pts = json::array();
    for (const auto& p : f.points) pts.push_back({p.x, p.y});
    json j{{"frame", f.frame}, {"detected", f.detected}, {"points", std::move(pts)}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::string aus_to_jsonl(const std::vector<AuFrame>& frames) {
  std::string out;
  for (const auto& f : frames) {
    json j{{"frame", f.frame}, {"au", json::object()}};
    for (const auto& [k, v] : f.intensity) j["au"][k] = v;
    if (!f.presence.empty()) {
      j["presence"] = json::object();
      for (const auto& [k, v] : f.presence) j["presence"][k] = v;
    }
    if (f.label) j["emotion"] = std::string(features::to_string(*f.label));
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline json persona_to_json(const PersonaProfile& p) {
  json j{{"affiliation", p.affiliation}, {"big_five", json::array()}, {"beliefs", json::array()}};
  for (const auto& b : p.big_five) j["big_five"].push_back({{"statement", b.statement}, {"score", b.score}});
  for (const auto& b : p.beliefs) {
    j["beliefs"].push_back({{"topic", b.topic}, {"selected_statement", b.selected_statement}});
  }
  return j;
}

inline json truth_to_json(const EngagementTruth& t) {
  json j{{"items", json::array()}, {"responses", json::object()}};
  for (const auto& it : t.items) {
    j["items"].push_back(
        {{"item_id", it.item_id}, {"statement", it.statement}, {"negatively_coded", it.negatively_coded}});
  }
  for (const auto& [key, v] : t.responses) j["responses"][key.first][key.second] = v;
  return j;
}

/// Writes every file named by the manifest under `dir`. The embedding file,
/// if named, is not written here (see baselines::write_embeddings).
inline void write_session(const Session& s, const fs::path& dir) {
  fs::create_directories(dir);
  io::write_file(dir / "manifest.json", manifest_to_json(s.manifest).dump(2) + "\n");
  io::write_file(dir / s.manifest.transcript_file, transcript_to_jsonl(s.segments));
  for (const auto& w : s.wearers) {
    io::write_file(dir / w.decl.gaze_file, gaze_to_csv(w.gaze));
    io::write_file(dir / w.decl.landmark_file, landmarks_to_jsonl(w.landmarks));
    io::write_file(dir / w.decl.au_file, aus_to_jsonl(w.aus));
    io::write_file(dir / w.decl.persona_file, persona_to_json(w.persona).dump(2) + "\n");
  }
  if (s.manifest.truth_file && s.truth) {
    io::write_file(dir / *s.manifest.truth_file, truth_to_json(*s.truth).dump(2) + "\n");
  }
}

}  // namespace engage::core
