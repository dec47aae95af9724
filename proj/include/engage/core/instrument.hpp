#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "engage/core/textio.hpp"
#include "engage/core/types.hpp"
#include "engage/data/embedded.hpp"

namespace engage::core {

/// The 53-item, 7-point engagement questionnaire (negatively coded items flagged).
inline std::vector<QuestionnaireItem> parse_items(const nlohmann::json& j) {
  std::vector<QuestionnaireItem> items;
  for (const auto& it : j.at("items")) {
    items.push_back({it.at("item_id").get<std::string>(), it.at("statement").get<std::string>(),
                     it.value("negatively_coded", false)});
  }
  return items;
}

inline const std::vector<QuestionnaireItem>& engagement_items() {
  static const std::vector<QuestionnaireItem> items =
      parse_items(nlohmann::json::parse(data::engagement_items));
  return items;
}

/// Loads an item list from JSON ({"items":[...]}) or from plain text with one
/// statement per line (ids Q1.., polarity looked up in the built-in instrument).
inline std::vector<QuestionnaireItem> load_items(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  const auto first = io::trim(text);
  if (!first.empty() && first.front() == '{') return parse_items(nlohmann::json::parse(text));
  std::vector<QuestionnaireItem> items;
  for (auto line : io::split_lines(text)) {
    line = io::trim(line);
    if (line.empty()) continue;
    QuestionnaireItem item{"Q" + std::to_string(items.size() + 1), std::string(line), false};
    for (const auto& known : engagement_items()) {
      if (known.statement == item.statement) {
        item.item_id = known.item_id;
        item.negatively_coded = known.negatively_coded;
      }
    }
    items.push_back(std::move(item));
  }
  return items;
}

inline const std::vector<std::string>& big_five_statements() {
  static const std::vector<std::string> s = nlohmann::json::parse(data::big_five_inventory)
                                                .at("statements")
                                                .get<std::vector<std::string>>();
  return s;
}

struct BeliefTopic {
  std::string topic;
  std::vector<std::string> options;
};

inline const std::vector<BeliefTopic>& belief_topics() {
  static const std::vector<BeliefTopic> topics = [] {
    std::vector<BeliefTopic> out;
    const auto doc = nlohmann::json::parse(data::beliefs_instrument);
    for (const auto& t : doc.at("topics")) {
      out.push_back({t.at("topic").get<std::string>(),
                     t.at("options").get<std::vector<std::string>>()});
    }
    return out;
  }();
  return topics;
}

}  // namespace engage::core
