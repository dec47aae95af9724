#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "engage/error.hpp"

namespace engage::baselines {

/// Per-item predictions for one query sequence.
struct ItemPrediction {
  std::vector<double> raw;  // unrounded, one per item
  std::vector<int> rounded; // half-up, clamped to [1,7]
};

inline int round_rating(double v) {
  const double r = std::floor(v + 0.5);
  return static_cast<int>(std::clamp(r, 1.0, 7.0));
}

/// Training targets: rows = training sequences, columns = items.
using TargetMatrix = Eigen::MatrixXd;

/// Mean ratings of the k training sequences nearest to the query under the
/// kernel distance sqrt(2 - 2K). `query_row` holds K(query, train_j).
/// Equal distances keep training order.
inline ItemPrediction knn_predict(const Eigen::Ref<const Eigen::VectorXd>& query_row, const TargetMatrix& targets,
                                  int k) {
  const auto n = targets.rows();
  if (query_row.size() != n) throw DimensionMismatch("kernel row and target rows differ");
  if (k < 1 || k > n) {
    throw InsufficientNeighbors("k = " + std::to_string(k) + " with " + std::to_string(n) + " training sequences");
  }
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) dist[static_cast<std::size_t>(j)] = std::sqrt(std::max(0.0, 2.0 - 2.0 * query_row(j)));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
  });

  ItemPrediction out;
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(targets.cols());
  for (int i = 0; i < k; ++i) sum += targets.row(order[static_cast<std::size_t>(i)]);
  sum /= static_cast<double>(k);
  for (Eigen::Index c = 0; c < sum.size(); ++c) {
    out.raw.push_back(sum(c));
    out.rounded.push_back(round_rating(sum(c)));
  }
  return out;
}

/// Kernel ridge regression, one output per item, on mean-centred targets.
/// Returns predictions for every query row of `query_train`
/// (rows = queries, cols = training sequences).
inline std::vector<ItemPrediction> kernel_ridge_fit_predict(const Eigen::MatrixXd& train_gram,
                                                            const TargetMatrix& targets,
                                                            const Eigen::MatrixXd& query_train, double lambda) {
  if (!(lambda > 0.0)) throw Error("ridge lambda must be positive");
  const auto n = targets.rows();
  if (train_gram.rows() != n || train_gram.cols() != n || query_train.cols() != n) {
    throw DimensionMismatch("gram, target and query shapes disagree");
  }
  const Eigen::RowVectorXd mean = targets.colwise().mean();
  const Eigen::MatrixXd centred = targets.rowwise() - mean;
  const Eigen::MatrixXd system = train_gram + lambda * Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  Eigen::MatrixXd alpha;
  if (llt.info() == Eigen::Success) {
    alpha = llt.solve(centred);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw SingularSystem("kernel system is singular at lambda = " + std::to_string(lambda));
    alpha = lu.solve(centred);
  }
  if (!alpha.allFinite()) throw SingularSystem("kernel system produced non-finite weights");
  const Eigen::MatrixXd pred = (query_train * alpha).rowwise() + mean;

  std::vector<ItemPrediction> out(static_cast<std::size_t>(query_train.rows()));
  for (Eigen::Index q = 0; q < pred.rows(); ++q) {
    auto& p = out[static_cast<std::size_t>(q)];
    for (Eigen::Index c = 0; c < pred.cols(); ++c) {
      const double v = std::clamp(pred(q, c), 1.0, 7.0);
      p.raw.push_back(v);
      p.rounded.push_back(round_rating(v));
    }
  }
  return out;
}

}  // namespace engage::baselines
