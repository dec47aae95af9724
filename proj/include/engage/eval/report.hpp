#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "engage/core/textio.hpp"
#include "engage/core/types.hpp"
#include "engage/eval/metrics.hpp"

namespace engage::eval {

struct MetricSelection {
  bool rmse = true;
  bool alpha = true;
  bool valence = true;
  bool ttest = true;
  bool items = true;

  /// Comma-separated subset of rmse, alpha, valence, ttest, items; "all" selects everything.
  static MetricSelection parse(std::string_view list) {
    MetricSelection m{false, false, false, false, false};
    std::string cur;
    auto flush = [&] {
      const auto name = std::string(io::trim(cur));
      cur.clear();
      if (name.empty()) return;
      if (name == "all") m = MetricSelection{};
      else if (name == "rmse") m.rmse = true;
      else if (name == "alpha") m.alpha = true;
      else if (name == "valence" || name == "confusion") m.valence = true;
      else if (name == "ttest") m.ttest = true;
      else if (name == "items") m.items = true;
      else throw Error("unknown metric: " + name);
    };
    for (char c : list) {
      if (c == ',') flush();
      else cur += c;
    }
    flush();
    return m;
  }
};

struct ReportOptions {
  MetricSelection metrics;
  AlphaLevel exact_level = AlphaLevel::interval;
  AlphaLevel valence_level = AlphaLevel::nominal;
  AlphaLevel arousal_level = AlphaLevel::interval;
  bool absolute_residuals = true;
  AccuracyGrouping item_grouping = AccuracyGrouping::ablation;
};

/// Flips truth and prediction of negatively coded items to 8 - r.
inline std::vector<PredictionRecord> reverse_code(std::span<const PredictionRecord> records,
                                                  std::span<const core::QuestionnaireItem> items) {
  std::set<std::string> negative;
  for (const auto& it : items) {
    if (it.negatively_coded) negative.insert(it.item_id);
  }
  std::vector<PredictionRecord> out(records.begin(), records.end());
  for (auto& r : out) {
    if (!negative.count(r.item_id)) continue;
    if (r.truth) r.truth = 8 - *r.truth;
    if (r.pred) r.pred = 8 - *r.pred;
    if (r.pred_raw) r.pred_raw = 8.0 - *r.pred_raw;
  }
  return out;
}

namespace detail {

inline nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

inline nlohmann::json alpha_json(const AlphaSummary& a) {
  return {{"level", std::string(to_string(a.level))},
          {"mean", a.mean},
          {"std", a.std},
          {"items", a.items},
          {"undefined_items", a.undefined_items}};
}

}  // namespace detail

/// Metric document: one block per ablation plus cross-ablation t-tests and
/// the per-item accuracy ranking. Failed predictions are counted, never scored.
inline nlohmann::json compute_report(std::span<const PredictionRecord> records, const ReportOptions& opt = {}) {
  using nlohmann::json;
  json rep;
  json per = json::object();
  for (const auto& abl : ablations_of(records)) {
    std::vector<PredictionRecord> sub;
    std::size_t failed = 0;
    for (const auto& r : records) {
      if (r.ablation != abl) continue;
      if (r.value()) sub.push_back(r);
      else ++failed;
    }
    json a{{"records", sub.size()}, {"failed", failed}};
    if (sub.empty()) {
      per[abl] = a;
      continue;
    }
    if (opt.metrics.rmse) {
      const auto r = rmse(sub);
      json folds = json::object();
      for (const auto& [k, v] : r.folds) folds[k] = v;
      a["rmse"] = {{"mean", r.mean}, {"std", r.std}, {"folds", folds}};
    }
    if (opt.metrics.alpha) {
      a["alpha_exact"] = detail::alpha_json(alpha_by_item(sub, AlphaScale::exact, opt.exact_level));
      a["alpha_valence"] = detail::alpha_json(alpha_by_item(sub, AlphaScale::valence, opt.valence_level));
      a["alpha_arousal"] = detail::alpha_json(alpha_by_item(sub, AlphaScale::arousal, opt.arousal_level));
    }
    if (opt.metrics.valence) {
      const auto c = confusion_and_accuracies(sub);
      json counts = json::array();
      for (const auto& row : c.counts) counts.push_back(row);
      json acc = json::object();
      for (std::size_t i = 0; i < 3; ++i) {
        acc[std::string(to_string(static_cast<Valence>(i)))] = detail::opt_json(c.class_accuracy[i]);
      }
      a["confusion"] = {{"order", {"agree", "neutral", "disagree"}},
                        {"counts", counts},
                        {"class_accuracy", acc},
                        {"macro_accuracy", detail::opt_json(c.macro_accuracy)}};
    }
    per[abl] = a;
  }
  rep["ablations"] = per;

  if (opt.metrics.ttest) {
    json tt = json::array();
    for (const auto& t : ablation_t_tests(records, opt.absolute_residuals)) {
      tt.push_back({{"a", t.ablation_a},
                    {"b", t.ablation_b},
                    {"n", t.result.n},
                    {"t", detail::opt_json(t.result.t)},
                    {"p", detail::opt_json(t.result.p)},
                    {"zero_variance", t.result.zero_variance}});
    }
    rep["t_tests"] = tt;
  }
  if (opt.metrics.items) {
    json items = json::array();
    for (const auto& it : per_item_accuracy(records, opt.item_grouping)) {
      items.push_back({{"item", it.item_id}, {"mean", it.mean}, {"std", it.std}, {"groups", it.groups}});
    }
    rep["item_accuracy"] = items;
  }
  return rep;
}

namespace detail {

inline std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.insert(0, w - s.size(), ' ');
  return s;
}

inline std::string padr(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

inline std::string num(const nlohmann::json& v, int decimals) {
  if (v.is_null()) return "n/a";
  return io::format_fixed(v.get<double>(), decimals);
}

}  // namespace detail

/// Plain-text tables: RMSE, alpha, valence confusion per ablation, t-tests,
/// and the ten best items.
inline std::string render_text(const nlohmann::json& rep) {
  using detail::num;
  using detail::pad;
  using detail::padr;
  std::ostringstream o;
  const auto& per = rep.at("ablations");

  o << "RMSE (mean +/- std across folds)\n";
  o << padr("ablation", 10) << pad("mean", 8) << pad("std", 8) << pad("folds", 7) << "\n";
  for (const auto& [abl, a] : per.items()) {
    if (!a.contains("rmse")) continue;
    o << padr(abl, 10) << pad(num(a["rmse"]["mean"], 3), 8) << pad(num(a["rmse"]["std"], 3), 8)
      << pad(std::to_string(a["rmse"]["folds"].size()), 7) << "\n";
  }

  o << "\nKrippendorff's alpha (mean +/- std across items)\n";
  o << padr("ablation", 10) << pad("exact", 16) << pad("valence", 16) << pad("arousal", 16) << "\n";
  for (const auto& [abl, a] : per.items()) {
    if (!a.contains("alpha_exact")) continue;
    o << padr(abl, 10);
    for (const char* k : {"alpha_exact", "alpha_valence", "alpha_arousal"}) {
      o << pad(num(a[k]["mean"], 3) + " +/- " + num(a[k]["std"], 3), 16);
    }
    o << "\n";
  }

  for (const auto& [abl, a] : per.items()) {
    if (!a.contains("confusion")) continue;
    const auto& c = a["confusion"];
    static constexpr const char* kShort[] = {"Agr", "Neu", "Dis"};
    o << "\n" << abl << " valence confusion (rows: truth, columns: prediction)\n";
    o << padr("", 6) << pad("Agr", 7) << pad("Neu", 7) << pad("Dis", 7) << pad("Acc", 8) << "\n";
    for (std::size_t i = 0; i < 3; ++i) {
      o << padr(kShort[i], 6);
      for (std::size_t j = 0; j < 3; ++j) o << pad(std::to_string(c["counts"][i][j].get<std::size_t>()), 7);
      o << pad(num(c["class_accuracy"][c["order"][i].get<std::string>()], 1), 8) << "\n";
    }
    o << padr("All", 27) << pad(num(c["macro_accuracy"], 1), 8) << "\n";
  }

  if (rep.contains("t_tests") && !rep["t_tests"].empty()) {
    o << "\nPaired t-tests on residuals\n";
    o << padr("pair", 14) << pad("n", 7) << pad("t", 10) << pad("p", 12) << "\n";
    for (const auto& t : rep["t_tests"]) {
      o << padr(t["a"].get<std::string>() + " vs " + t["b"].get<std::string>(), 14)
        << pad(std::to_string(t["n"].get<std::size_t>()), 7) << pad(num(t["t"], 3), 10) << pad(num(t["p"], 6), 12)
        << "\n";
    }
  }

  if (rep.contains("item_accuracy") && !rep["item_accuracy"].empty()) {
    o << "\nBest items by exact-match accuracy\n";
    std::size_t shown = 0;
    for (const auto& it : rep["item_accuracy"]) {
      if (shown++ == 10) break;
      o << padr(it["item"].get<std::string>(), 8) << pad(num(it["mean"], 1), 7) << " +/- " << num(it["std"], 1)
        << "\n";
    }
  }
  return o.str();
}

/// Bar chart of RMSE (with std whiskers) and exact alpha per ablation.
inline std::string render_svg(const nlohmann::json& rep) {
  struct Bar {
    std::string label;
    double rmse = 0.0, rmse_std = 0.0, alpha = 0.0;
  };
  std::vector<Bar> bars;
  double top = 1.0;
  for (const auto& [abl, a] : rep.at("ablations").items()) {
    Bar b{abl};
    if (a.contains("rmse")) {
      b.rmse = a["rmse"]["mean"].get<double>();
      b.rmse_std = a["rmse"]["std"].get<double>();
    }
    if (a.contains("alpha_exact")) b.alpha = a["alpha_exact"]["mean"].get<double>();
    top = std::max(top, b.rmse + b.rmse_std);
    bars.push_back(b);
  }
  const double W = 120.0 * static_cast<double>(std::max<std::size_t>(bars.size(), 1)) + 80.0;
  const double H = 300.0, base = 250.0, span = 200.0;
  auto f = [](double v) { return io::format_fixed(v, 1); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(W) << "\" height=\"" << f(H) << "\">\n";
  o << "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">RMSE (blue) and exact alpha (orange) by "
       "ablation</text>\n";
  o << "<line x1=\"40\" y1=\"" << f(base) << "\" x2=\"" << f(W - 20) << "\" y2=\"" << f(base)
    << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& b = bars[i];
    const double x = 60.0 + 120.0 * static_cast<double>(i);
    const double h = span * b.rmse / top;
    o << "<rect x=\"" << f(x) << "\" y=\"" << f(base - h) << "\" width=\"40\" height=\"" << f(h)
      << "\" fill=\"steelblue\"/>\n";
    const double wt = span * (b.rmse + b.rmse_std) / top, wb = span * std::max(0.0, b.rmse - b.rmse_std) / top;
    o << "<line x1=\"" << f(x + 20) << "\" y1=\"" << f(base - wt) << "\" x2=\"" << f(x + 20) << "\" y2=\""
      << f(base - wb) << "\" stroke=\"black\"/>\n";
    const double ah = span * std::clamp(b.alpha, 0.0, 1.0);
    o << "<rect x=\"" << f(x + 45) << "\" y=\"" << f(base - ah) << "\" width=\"40\" height=\"" << f(ah)
      << "\" fill=\"darkorange\"/>\n";
    o << "<text x=\"" << f(x + 20) << "\" y=\"" << f(base + 18) << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << b.label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace engage::eval
