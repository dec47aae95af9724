#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "engage/baselines/kernels.hpp"
#include "engage/core/textio.hpp"
#include "engage/fusion/render.hpp"

namespace engage::baselines {

/// Text embeddings per merged turn, keyed by (session, wearer, turn index
/// within the session's merged turn list).
struct EmbeddingTable {
  std::size_t dim = 0;
  std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> vectors;

  const std::vector<double>* find(const std::string& session, const std::string& wearer, std::size_t turn) const {
    auto it = vectors.find({session, wearer, turn});
    return it == vectors.end() ? nullptr : &it->second;
  }
};

inline EmbeddingTable parse_embeddings(std::string_view text, const std::string& file = "<embeddings>") {
  EmbeddingTable t;
  const auto lines = io::split_lines(text);
  if (lines.empty()) throw SchemaViolation(file, 1, "dim", "missing header");
  const auto header = io::trim(lines[0]);
  if (header.substr(0, 4) != "dim=") throw SchemaViolation(file, 1, "dim", "header must be dim=<d>");
  const auto d = io::parse_double(header.substr(4));
  if (!d || *d < 1 || *d != static_cast<double>(static_cast<std::size_t>(*d))) {
    throw SchemaViolation(file, 1, "dim", "dimension must be a positive integer");
  }
  t.dim = static_cast<std::size_t>(*d);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (io::trim(lines[i]).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(lines[i]);
      auto vec = j.at("vector").get<std::vector<double>>();
      if (vec.size() != t.dim) {
        throw SchemaViolation(file, i + 1, "vector", "expected " + std::to_string(t.dim) + " values");
      }
      t.vectors[{j.at("session").get<std::string>(), j.at("wearer").get<std::string>(),
                 j.at("turn_index").get<std::size_t>()}] = std::move(vec);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaViolation(file, i + 1, "<record>", e.what());
    }
  }
  return t;
}

inline EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  return parse_embeddings(io::read_file(path), path.string());
}

inline std::string embeddings_to_text(const EmbeddingTable& t) {
  std::string out = "dim=" + std::to_string(t.dim) + "\n";
  for (const auto& [key, vec] : t.vectors) {
    nlohmann::json j{{"session", std::get<0>(key)}, {"wearer", std::get<1>(key)}, {"turn_index", std::get<2>(key)}};
    j["vector"] = vec;
    out += j.dump();
    out += '\n';
  }
  return out;
}

/// Which per-turn features go into a sequence: (T)ext embedding,
/// (G)aze fraction, (F)ace emotion one-hot.
struct Modalities {
  bool text = true;
  bool gaze = true;
  bool face = true;

  static Modalities parse(std::string_view code) {
    Modalities m{false, false, false};
    for (char c : code) {
      bool* flag = c == 'T' ? &m.text : c == 'G' ? &m.gaze : c == 'F' ? &m.face : nullptr;
      if (!flag) throw Error("modality letters must be from {T,G,F}: '" + std::string(1, c) + "'");
      *flag = true;
    }
    if (!m.text && !m.gaze && !m.face) throw Error("at least one modality is required");
    return m;
  }
  std::string tag() const {
    std::string s;
    if (text) s += 'T';
    if (gaze) s += 'G';
    if (face) s += 'F';
    return s;
  }
};

/// The wearer's own turns within the time budget, one row each:
/// [embedding | emotion one-hot (8) | gaze fraction].
inline FeatureSequence build_sequence(const fusion::Conversation& conv, const std::string& dyad_id,
                                      const std::string& wearer, const Modalities& mods,
                                      const EmbeddingTable* embeddings, double budget_seconds = 300.0) {
  const std::size_t me = conv.index_of(wearer);
  if (mods.text && !embeddings) throw Error("text modality needs an embedding file");
  const std::size_t dim = (mods.text ? embeddings->dim : 0) + (mods.face ? features::kEmotionCount : 0) + (mods.gaze ? 1 : 0);

  std::vector<Eigen::RowVectorXd> rows;
  for (std::size_t ti = 0; ti < conv.turns.size(); ++ti) {
    const auto& t = conv.turns[ti];
    if (t.speaker != wearer || t.start >= conv.conversation_start + budget_seconds) continue;
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(dim));
    Eigen::Index col = 0;
    if (mods.text) {
      const auto* v = embeddings->find(conv.session_id, wearer, ti);
      if (!v) {
        throw Error("no embedding for " + conv.session_id + "/" + wearer + " turn " + std::to_string(ti));
      }
      for (double x : *v) row(col++) = x;
    }
    if (mods.face) {
      row(col + static_cast<Eigen::Index>(t.cues[me].emotion)) = 1.0;
      col += static_cast<Eigen::Index>(features::kEmotionCount);
    }
    if (mods.gaze) row(col++) = t.cues[me].gaze_fraction;
    rows.push_back(std::move(row));
  }

  FeatureSequence s;
  s.session_id = conv.session_id;
  s.dyad_id = dyad_id;
  s.wearer_id = wearer;
  s.vectors.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) s.vectors.row(static_cast<Eigen::Index>(i)) = rows[i];
  return s;
}

}  // namespace engage::baselines
