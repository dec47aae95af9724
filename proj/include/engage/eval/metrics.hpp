#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "engage/error.hpp"
#include "engage/eval/records.hpp"

namespace engage::eval {

// ---- small statistics helpers ----------------------------------------------

inline double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// ddof = 0 for the population deviation, 1 for the sample deviation.
/// Returns 0 when there are not more than ddof values.
inline double stddev_of(std::span<const double> v, int ddof) {
  if (v.size() <= static_cast<std::size_t>(ddof)) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - static_cast<std::size_t>(ddof)));
}

inline double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

/// Ranks starting at 1; tied values share the mean of their ranks.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("correlation needs two equal-length samples of size >= 2");
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("correlation of a constant sample");
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

// ---- RMSE -------------------------------------------------------------------

/// Records that count toward metrics: truth present and some prediction.
inline bool evaluable(const PredictionRecord& r) { return r.truth.has_value() && r.value().has_value(); }

inline std::string fold_key(const PredictionRecord& r) { return r.dyad_id.empty() ? r.session_id : r.dyad_id; }

struct RmseSummary {
  double mean = 0.0;
  double std = 0.0;  // sample deviation across folds
  std::vector<std::pair<std::string, double>> folds;
  std::size_t n_records = 0;
};

/// RMSE per fold (dyad, or session when no dyad is recorded) over every
/// (wearer, item) pair, then mean and sample deviation across folds.
inline RmseSummary rmse(std::span<const PredictionRecord> records) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  RmseSummary out;
  for (const auto& r : records) {
    if (!evaluable(r)) continue;
    const double e = *r.value() - static_cast<double>(*r.truth);
    auto& a = acc[fold_key(r)];
    a.first += e * e;
    ++a.second;
    ++out.n_records;
  }
  if (acc.empty()) throw NoPredictions();
  std::vector<double> vals;
  for (const auto& [k, a] : acc) {
    const double v = std::sqrt(a.first / static_cast<double>(a.second));
    out.folds.emplace_back(k, v);
    vals.push_back(v);
  }
  out.mean = mean_of(vals);
  out.std = stddev_of(vals, 1);
  return out;
}

// ---- valence / arousal --------------------------------------------------------

/// Order matches the confusion table layout: agree, neutral, disagree.
enum class Valence { agree = 0, neutral = 1, disagree = 2 };

inline std::string_view to_string(Valence v) {
  switch (v) {
    case Valence::agree: return "agree";
    case Valence::neutral: return "neutral";
    case Valence::disagree: return "disagree";
  }
  return "neutral";
}

struct Category {
  Valence valence;
  int arousal;
  friend bool operator==(const Category&, const Category&) = default;
};

inline Category categorize(int rating) {
  if (rating < 1 || rating > 7) throw OutOfRange("rating " + std::to_string(rating) + " outside [1,7]");
  const Valence v = rating < 4 ? Valence::disagree : rating == 4 ? Valence::neutral : Valence::agree;
  return {v, std::abs(rating - 4)};
}

// ---- Krippendorff's alpha -------------------------------------------------------

enum class AlphaLevel { nominal, ordinal, interval };

inline std::string_view to_string(AlphaLevel l) {
  switch (l) {
    case AlphaLevel::nominal: return "nominal";
    case AlphaLevel::ordinal: return "ordinal";
    case AlphaLevel::interval: return "interval";
  }
  return "interval";
}

inline AlphaLevel parse_alpha_level(std::string_view s) {
  if (s == "nominal") return AlphaLevel::nominal;
  if (s == "ordinal") return AlphaLevel::ordinal;
  if (s == "interval") return AlphaLevel::interval;
  throw Error("unknown alpha level: " + std::string(s));
}

/// Two-rater alpha from the coincidence matrix. Returns nullopt when the
/// expected disagreement is zero (a single value observed overall), where
/// alpha is undefined.
inline std::optional<double> krippendorff_alpha(std::span<const std::pair<int, int>> units, AlphaLevel level) {
  if (units.size() < 2) throw Error("alpha needs at least 2 paired units");
  std::set<int> seen;
  for (const auto& [a, b] : units) {
    seen.insert(a);
    seen.insert(b);
  }
  const std::vector<int> values(seen.begin(), seen.end());
  const std::size_t V = values.size();
  auto pos = [&](int v) { return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), v) - values.begin()); };

  std::vector<double> o(V * V, 0.0);
  for (const auto& [a, b] : units) {
    o[pos(a) * V + pos(b)] += 1.0;
    o[pos(b) * V + pos(a)] += 1.0;
  }
  std::vector<double> nc(V, 0.0);
  for (std::size_t c = 0; c < V; ++c) {
    for (std::size_t k = 0; k < V; ++k) nc[c] += o[c * V + k];
  }
  const double n = 2.0 * static_cast<double>(units.size());

  auto delta2 = [&](std::size_t c, std::size_t k) -> double {
    if (c == k) return 0.0;
    switch (level) {
      case AlphaLevel::nominal: return 1.0;
      case AlphaLevel::interval: {
        const double d = values[c] - values[k];
        return d * d;
      }
      case AlphaLevel::ordinal: {
        const auto [lo, hi] = std::minmax(c, k);
        double s = 0.0;
        for (std::size_t g = lo; g <= hi; ++g) s += nc[g];
        s -= 0.5 * (nc[lo] + nc[hi]);
        return s * s;
      }
    }
    return 0.0;
  };

  double observed = 0.0, expected = 0.0;
  for (std::size_t c = 0; c < V; ++c) {
    for (std::size_t k = 0; k < V; ++k) {
      const double d = delta2(c, k);
      observed += o[c * V + k] * d;
      expected += nc[c] * nc[k] * d;
    }
  }
  if (expected == 0.0) return std::nullopt;
  return 1.0 - (n - 1.0) * observed / expected;
}

/// What a rating is reduced to before agreement is measured.
enum class AlphaScale { exact, valence, arousal };

inline int project(int rating, AlphaScale s) {
  switch (s) {
    case AlphaScale::exact: return rating;
    case AlphaScale::valence: return static_cast<int>(categorize(rating).valence);
    case AlphaScale::arousal: return categorize(rating).arousal;
  }
  return rating;
}

struct AlphaSummary {
  AlphaScale scale = AlphaScale::exact;
  AlphaLevel level = AlphaLevel::interval;
  double mean = 0.0;
  double std = 0.0;  // population deviation across items with a defined alpha
  std::size_t items = 0;
  std::size_t undefined_items = 0;
  std::map<std::string, std::optional<double>> per_item;
};

/// Alpha per questionnaire item over (session, wearer) units with the human
/// and the model as the two raters, then mean/std across items.
inline AlphaSummary alpha_by_item(std::span<const PredictionRecord> records, AlphaScale scale, AlphaLevel level) {
  std::map<std::string, std::vector<std::pair<int, int>>> by_item;
  for (const auto& r : records) {
    if (!r.truth || !r.pred) continue;
    by_item[r.item_id].emplace_back(project(*r.truth, scale), project(*r.pred, scale));
  }
  if (by_item.empty()) throw NoPredictions();
  AlphaSummary s;
  s.scale = scale;
  s.level = level;
  std::vector<double> defined;
  for (const auto& [item, units] : by_item) {
    std::optional<double> a;
    if (units.size() >= 2) a = krippendorff_alpha(units, level);
    s.per_item[item] = a;
    ++s.items;
    if (a) defined.push_back(*a);
    else ++s.undefined_items;
  }
  s.mean = mean_of(defined);
  s.std = stddev_of(defined, 0);
  return s;
}

// ---- confusion ------------------------------------------------------------------

struct ConfusionReport {
  std::array<std::array<std::size_t, 3>, 3> counts{};  // [truth][pred], agree/neutral/disagree
  std::array<std::optional<double>, 3> class_accuracy;  // percent, one decimal; nullopt = empty class
  std::optional<double> macro_accuracy;                 // mean of the defined class accuracies, one decimal
  std::size_t total = 0;
};

/// Accuracies from a filled count matrix. Macro accuracy averages the
/// already-rounded class figures.
inline ConfusionReport finish_confusion(const std::array<std::array<std::size_t, 3>, 3>& counts) {
  ConfusionReport c;
  c.counts = counts;
  std::vector<double> defined;
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t row = 0;
    for (std::size_t j = 0; j < 3; ++j) row += counts[i][j];
    c.total += row;
    if (row == 0) continue;
    c.class_accuracy[i] = round_to(100.0 * static_cast<double>(counts[i][i]) / static_cast<double>(row), 1);
    defined.push_back(*c.class_accuracy[i]);
  }
  if (!defined.empty()) c.macro_accuracy = round_to(mean_of(defined), 1);
  return c;
}

inline ConfusionReport confusion_and_accuracies(std::span<const PredictionRecord> records) {
  std::array<std::array<std::size_t, 3>, 3> counts{};
  bool any = false;
  for (const auto& r : records) {
    if (!r.truth || !r.pred) continue;
    const auto t = static_cast<std::size_t>(categorize(*r.truth).valence);
    const auto p = static_cast<std::size_t>(categorize(*r.pred).valence);
    ++counts[t][p];
    any = true;
  }
  if (!any) throw NoPredictions();
  return finish_confusion(counts);
}

// ---- paired t-test --------------------------------------------------------------

struct TTestResult {
  std::size_t n = 0;
  std::optional<double> t;  // absent when every difference is identical
  std::optional<double> p;  // two-tailed
  bool zero_variance = false;
};

inline TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("paired samples differ in length");
  if (a.size() < 2) throw Error("paired t-test needs n >= 2");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  TTestResult r;
  r.n = d.size();
  const double sd = stddev_of(d, 1);
  if (sd == 0.0) {
    r.zero_variance = true;
    return r;
  }
  const double t = mean_of(d) / (sd / std::sqrt(static_cast<double>(d.size())));
  const boost::math::students_t dist(static_cast<double>(d.size() - 1));
  r.t = t;
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return r;
}

struct PairedResiduals {
  std::vector<std::tuple<std::string, std::string, std::string>> keys;  // session, wearer, item
  std::vector<double> a;
  std::vector<double> b;
};

/// Residuals of two ablations matched on (session, wearer, item). Only keys
/// evaluable in both ablations are kept. Absolute residuals by default.
inline PairedResiduals pair_residuals(std::span<const PredictionRecord> records, const std::string& ablation_a,
                                      const std::string& ablation_b, bool absolute = true) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, double> ra, rb;
  for (const auto& r : records) {
    if (!evaluable(r)) continue;
    double res = *r.value() - static_cast<double>(*r.truth);
    if (absolute) res = std::fabs(res);
    Key k{r.session_id, r.wearer_id, r.item_id};
    if (r.ablation == ablation_a) ra[k] = res;
    else if (r.ablation == ablation_b) rb[k] = res;
  }
  PairedResiduals p;
  for (const auto& [k, v] : ra) {
    auto it = rb.find(k);
    if (it == rb.end()) continue;
    p.keys.push_back(k);
    p.a.push_back(v);
    p.b.push_back(it->second);
  }
  return p;
}

struct AblationTTest {
  std::string ablation_a;
  std::string ablation_b;
  TTestResult result;
};

inline std::vector<std::string> ablations_of(std::span<const PredictionRecord> records) {
  std::set<std::string> s;
  for (const auto& r : records) s.insert(r.ablation);
  return {s.begin(), s.end()};
}

/// t-test for every unordered pair of ablations present in the records.
inline std::vector<AblationTTest> ablation_t_tests(std::span<const PredictionRecord> records, bool absolute = true) {
  const auto abl = ablations_of(records);
  std::vector<AblationTTest> out;
  for (std::size_t i = 0; i < abl.size(); ++i) {
    for (std::size_t j = i + 1; j < abl.size(); ++j) {
      const auto p = pair_residuals(records, abl[i], abl[j], absolute);
      if (p.a.size() < 2) continue;
      out.push_back({abl[i], abl[j], paired_t_test(p.a, p.b)});
    }
  }
  return out;
}

// ---- per-item accuracy ----------------------------------------------------------

enum class AccuracyGrouping { ablation, ablation_fold };

struct ItemAccuracy {
  std::string item_id;
  double mean = 0.0;  // percent
  double std = 0.0;   // population deviation across groups
  std::size_t groups = 0;
};

/// Exact-match accuracy per item within each group, then mean/std across
/// groups; sorted by descending mean, ties by item id.
inline std::vector<ItemAccuracy> per_item_accuracy(std::span<const PredictionRecord> records,
                                                   AccuracyGrouping grouping = AccuracyGrouping::ablation) {
  std::map<std::string, std::map<std::string, std::pair<std::size_t, std::size_t>>> hits;  // item -> group -> (hit, n)
  for (const auto& r : records) {
    if (!r.truth || !r.pred) continue;
    std::string g = r.ablation;
    if (grouping == AccuracyGrouping::ablation_fold) g += "/" + fold_key(r);
    auto& h = hits[r.item_id][g];
    h.first += *r.truth == *r.pred ? 1 : 0;
    ++h.second;
  }
  std::vector<ItemAccuracy> out;
  for (const auto& [item, groups] : hits) {
    std::vector<double> acc;
    for (const auto& [g, h] : groups) acc.push_back(100.0 * static_cast<double>(h.first) / static_cast<double>(h.second));
    out.push_back({item, mean_of(acc), stddev_of(acc, 0), acc.size()});
  }
  std::stable_sort(out.begin(), out.end(), [](const ItemAccuracy& a, const ItemAccuracy& b) {
    if (a.mean != b.mean) return a.mean > b.mean;
    return a.item_id < b.item_id;
  });
  return out;
}

}  // namespace engage::eval
