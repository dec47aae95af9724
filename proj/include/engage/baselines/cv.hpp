#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "engage/baselines/kernels.hpp"
#include "engage/baselines/models.hpp"
#include "engage/core/parallel.hpp"
#include "engage/eval/records.hpp"

namespace engage::baselines {

enum class ModelKind { knn, kernel_ridge };

inline std::string to_string(ModelKind m) { return m == ModelKind::knn ? "knn" : "kernel_ridge"; }

struct ModelSpec {
  ModelKind model = ModelKind::knn;
  KernelKind kernel = KernelKind::gak;
  double sigma = 1.0;
  int k = 1;             // knn only
  double lambda = 1.0;   // kernel_ridge only

  void check() const {
    if (!(sigma > 0.0)) throw Error("sigma must be positive");
    if (model == ModelKind::knn && k < 1) throw Error("k must be >= 1");
    if (model == ModelKind::kernel_ridge && !(lambda > 0.0)) throw Error("lambda must be positive");
  }
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Hyperparameter grid for one model/kernel pair.
struct ModelGrid {
  ModelKind model = ModelKind::knn;
  KernelKind kernel = KernelKind::gak;
  std::vector<double> sigmas{1.0};
  std::vector<int> ks{1, 3, 5};
  std::vector<double> lambdas{0.1, 1.0};

  /// Candidates in tie-break order: smaller sigma first, then smaller k or lambda.
  std::vector<ModelSpec> expand() const {
    auto s = sigmas;
    std::sort(s.begin(), s.end());
    std::vector<ModelSpec> out;
    for (double sigma : s) {
      if (model == ModelKind::knn) {
        auto kk = ks;
        std::sort(kk.begin(), kk.end());
        for (int k : kk) out.push_back({model, kernel, sigma, k, 1.0});
      } else {
        auto ll = lambdas;
        std::sort(ll.begin(), ll.end());
        for (double l : ll) out.push_back({model, kernel, sigma, 1, l});
      }
    }
    if (out.empty()) throw Error("empty hyperparameter grid");
    for (const auto& m : out) m.check();
    return out;
  }
};

/// Sequences with their questionnaire answers. targets has one row per
/// sequence and one column per item in item_ids.
struct CvDataset {
  std::vector<std::string> item_ids;
  std::vector<FeatureSequence> sequences;
  TargetMatrix targets;
  std::string tag;  // written into each record's ablation field

  std::vector<std::string> dyads() const {
    std::set<std::string> d;
    for (const auto& s : sequences) d.insert(s.dyad_id);
    return {d.begin(), d.end()};
  }
};

struct FoldResult {
  std::string held_out_dyad;
  ModelSpec chosen;
  double inner_rmse = 0.0;
  std::vector<eval::PredictionRecord> records;
  double rmse = 0.0;
  std::vector<std::string> train_dyads;
  std::vector<std::string> train_wearers;
  std::vector<std::string> test_wearers;
};

struct CvOptions {
  unsigned jobs = 1;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Test = every sequence of `dyad`; train = every other sequence whose
/// wearer is not also a test wearer (participants may appear in several dyads).
inline Split split_out(const std::vector<FeatureSequence>& seqs, const std::vector<std::size_t>& pool,
                       const std::string& dyad) {
  Split s;
  std::set<std::string> test_wearers;
  for (auto i : pool) {
    if (seqs[i].dyad_id == dyad) {
      s.test.push_back(i);
      test_wearers.insert(seqs[i].wearer_id);
    }
  }
  for (auto i : pool) {
    if (seqs[i].dyad_id != dyad && !test_wearers.count(seqs[i].wearer_id)) s.train.push_back(i);
  }
  return s;
}

namespace detail {

inline Eigen::MatrixXd take(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows,
                            const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
    }
  }
  return out;
}

inline TargetMatrix take_rows(const TargetMatrix& t, const std::vector<std::size_t>& rows) {
  TargetMatrix out(static_cast<Eigen::Index>(rows.size()), t.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = t.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

/// Predictions for split.test, one ItemPrediction per test sequence.
inline std::vector<ItemPrediction> predict(const ModelSpec& spec, const Eigen::MatrixXd& gram, const TargetMatrix& targets,
                                           const Split& split) {
  const auto y = take_rows(targets, split.train);
  const auto qt = take(gram, split.test, split.train);
  if (spec.model == ModelKind::knn) {
    std::vector<ItemPrediction> out;
    for (Eigen::Index q = 0; q < qt.rows(); ++q) out.push_back(knn_predict(qt.row(q).transpose(), y, spec.k));
    return out;
  }
  return kernel_ridge_fit_predict(take(gram, split.train, split.train), y, qt, spec.lambda);
}

inline double split_rmse(const std::vector<ItemPrediction>& preds, const TargetMatrix& targets,
                         const std::vector<std::size_t>& test) {
  double ss = 0.0;
  std::size_t n = 0;
  for (std::size_t q = 0; q < test.size(); ++q) {
    for (std::size_t c = 0; c < preds[q].raw.size(); ++c) {
      const double e = preds[q].raw[c] - targets(static_cast<Eigen::Index>(test[q]), static_cast<Eigen::Index>(c));
      ss += e * e;
      ++n;
    }
  }
  return n ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
}

inline FoldResult make_fold(const CvDataset& data, const std::string& dyad, const Split& split,
                            const std::vector<ItemPrediction>& preds, const std::string& source) {
  FoldResult f;
  f.held_out_dyad = dyad;
  std::set<std::string> td, tw, sw;
  for (auto i : split.train) {
    td.insert(data.sequences[i].dyad_id);
    tw.insert(data.sequences[i].wearer_id);
  }
  for (auto i : split.test) sw.insert(data.sequences[i].wearer_id);
  f.train_dyads.assign(td.begin(), td.end());
  f.train_wearers.assign(tw.begin(), tw.end());
  f.test_wearers.assign(sw.begin(), sw.end());
  for (std::size_t q = 0; q < split.test.size(); ++q) {
    const auto& seq = data.sequences[split.test[q]];
    for (std::size_t c = 0; c < data.item_ids.size(); ++c) {
      eval::PredictionRecord r;
      r.session_id = seq.session_id;
      r.dyad_id = seq.dyad_id;
      r.wearer_id = seq.wearer_id;
      r.item_id = data.item_ids[c];
      r.ablation = data.tag;
      r.truth = static_cast<int>(std::lround(data.targets(static_cast<Eigen::Index>(split.test[q]), static_cast<Eigen::Index>(c))));
      r.pred = preds[q].rounded[c];
      r.pred_raw = preds[q].raw[c];
      r.source = source;
      f.records.push_back(std::move(r));
    }
  }
  f.rmse = split_rmse(preds, data.targets, split.test);
  return f;
}

inline void check_dataset(const CvDataset& data) {
  if (data.targets.rows() != static_cast<Eigen::Index>(data.sequences.size()) ||
      data.targets.cols() != static_cast<Eigen::Index>(data.item_ids.size())) {
    throw DimensionMismatch("targets must be sequences x items");
  }
  const auto n = data.dyads().size();
  if (n < 3) throw TooFewDyads("leave-one-dyad-out needs at least 3 dyads, got " + std::to_string(n));
}

}  // namespace detail

/// Leave-one-dyad-out evaluation with hyperparameters chosen by an inner
/// leave-one-dyad-out over the training dyads of each outer fold.
inline std::vector<FoldResult> lodo_cv(const CvDataset& data, const ModelGrid& grid, const CvOptions& opt = {}) {
  detail::check_dataset(data);
  const auto candidates = grid.expand();

  std::map<double, Eigen::MatrixXd> grams;
  for (const auto& c : candidates) {
    if (!grams.count(c.sigma)) grams[c.sigma] = normalized_gram(data.sequences, grid.kernel, c.sigma, opt.jobs).values;
  }

  std::vector<std::size_t> all(data.sequences.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto dyads = data.dyads();
  std::vector<FoldResult> folds(dyads.size());

  core::parallel_for(dyads.size(), opt.jobs, [&](std::size_t d) {
    const auto outer = split_out(data.sequences, all, dyads[d]);
    std::set<std::string> inner_dyads;
    for (auto i : outer.train) inner_dyads.insert(data.sequences[i].dyad_id);

    std::vector<Split> inner;
    for (const auto& e : inner_dyads) inner.push_back(split_out(data.sequences, outer.train, e));

    const ModelSpec* best = nullptr;
    double best_rmse = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
      double sum = 0.0;
      std::size_t used = 0;
      bool feasible = true;
      for (const auto& s : inner) {
        if (s.test.empty()) continue;
        if (c.model == ModelKind::knn && static_cast<std::size_t>(c.k) > s.train.size()) {
          feasible = false;
          break;
        }
        try {
          sum += detail::split_rmse(detail::predict(c, grams.at(c.sigma), data.targets, s), data.targets, s.test);
          ++used;
        } catch (const SingularSystem&) {
          feasible = false;
          break;
        }
      }
      if (!feasible || used == 0) continue;
      const double mean = sum / static_cast<double>(used);
      if (mean < best_rmse - 1e-12) {
        best_rmse = mean;
        best = &c;
      }
    }
    if (!best) throw InsufficientNeighbors("no feasible hyperparameters for fold " + dyads[d]);

    const auto preds = detail::predict(*best, grams.at(best->sigma), data.targets, outer);
    folds[d] = detail::make_fold(data, dyads[d], outer, preds, to_string(best->model));
    folds[d].chosen = *best;
    folds[d].inner_rmse = best_rmse;
  });
  return folds;
}

/// Reference predictor: per-item mean of the training fold, same splits as lodo_cv.
inline std::vector<FoldResult> constant_mean_cv(const CvDataset& data) {
  detail::check_dataset(data);
  std::vector<std::size_t> all(data.sequences.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<FoldResult> folds;
  for (const auto& dyad : data.dyads()) {
    const auto split = split_out(data.sequences, all, dyad);
    if (split.train.empty()) throw InsufficientNeighbors("fold " + dyad + " has no training data");
    const Eigen::RowVectorXd mean = detail::take_rows(data.targets, split.train).colwise().mean();
    ItemPrediction p;
    for (Eigen::Index c = 0; c < mean.size(); ++c) {
      p.raw.push_back(mean(c));
      p.rounded.push_back(round_rating(mean(c)));
    }
    folds.push_back(detail::make_fold(data, dyad, split, std::vector<ItemPrediction>(split.test.size(), p), "mean"));
  }
  return folds;
}

inline std::vector<eval::PredictionRecord> fold_records(const std::vector<FoldResult>& folds) {
  std::vector<eval::PredictionRecord> out;
  for (const auto& f : folds) out.insert(out.end(), f.records.begin(), f.records.end());
  return out;
}

inline double mean_fold_rmse(const std::vector<FoldResult>& folds) {
  if (folds.empty()) return 0.0;
  double s = 0.0;
  for (const auto& f : folds) s += f.rmse;
  return s / static_cast<double>(folds.size());
}

}  // namespace engage::baselines
