#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "engage/core/textio.hpp"
#include "engage/error.hpp"

namespace engage::eval {

/// One predicted questionnaire answer, the unit every metric consumes.
struct PredictionRecord {
  std::string session_id;
  std::string dyad_id;  // fold key for dyad-level grouping; may be empty
  std::string wearer_id;
  std::string item_id;
  std::string ablation;
  std::optional<int> truth;
  std::optional<int> pred;        // rounded rating in [1,7]
  std::optional<double> pred_raw; // unrounded model output, when there is one
  std::string source;             // "direct", "fallback", "knn", "failed", ...
  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;

  /// Value used for squared-error metrics: the unrounded output when present.
  std::optional<double> value() const {
    if (pred_raw) return pred_raw;
    if (pred) return static_cast<double>(*pred);
    return std::nullopt;
  }
};

inline nlohmann::json to_json(const PredictionRecord& r) {
  nlohmann::json j{{"session", r.session_id}, {"dyad", r.dyad_id},     {"wearer", r.wearer_id},
                   {"item", r.item_id},       {"ablation", r.ablation}, {"source", r.source}};
  j["truth"] = r.truth ? nlohmann::json(*r.truth) : nlohmann::json(nullptr);
  j["pred"] = r.pred ? nlohmann::json(*r.pred) : nlohmann::json(nullptr);
  j["pred_raw"] = r.pred_raw ? nlohmann::json(*r.pred_raw) : nlohmann::json(nullptr);
  return j;
}

inline PredictionRecord record_from_json(const nlohmann::json& j) {
  PredictionRecord r;
  r.session_id = j.at("session").get<std::string>();
  r.dyad_id = j.value("dyad", std::string{});
  r.wearer_id = j.at("wearer").get<std::string>();
  r.item_id = j.at("item").get<std::string>();
  r.ablation = j.value("ablation", std::string{});
  r.source = j.value("source", std::string{});
  if (j.contains("truth") && !j["truth"].is_null()) r.truth = j["truth"].get<int>();
  if (j.contains("pred") && !j["pred"].is_null()) r.pred = j["pred"].get<int>();
  if (j.contains("pred_raw") && !j["pred_raw"].is_null()) r.pred_raw = j["pred_raw"].get<double>();
  return r;
}

/// Records file: one record per line. Lines carrying a "summary" key
/// (run-report footers) are skipped.
inline std::vector<PredictionRecord> parse_records(std::string_view text) {
  std::vector<PredictionRecord> out;
  std::size_t line_no = 0;
  for (auto line : io::split_lines(text)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.contains("summary")) continue;
      out.push_back(record_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaViolation("<records>", line_no, "<record>", e.what());
    }
  }
  return out;
}

inline std::string records_to_jsonl(const std::vector<PredictionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

}  // namespace engage::eval
