#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "engage/error.hpp"

namespace engage::baselines {

/// Per-turn feature vectors of one wearer in one session (rows = turns).
struct FeatureSequence {
  std::string session_id;
  std::string dyad_id;
  std::string wearer_id;
  Eigen::MatrixXd vectors;

  std::string id() const { return session_id + "/" + wearer_id; }
  Eigen::Index length() const { return vectors.rows(); }
  Eigen::Index dim() const { return vectors.cols(); }
};

inline double squared_distance(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw DimensionMismatch("vector dimensions differ: " + std::to_string(x.size()) + " vs " +
                            std::to_string(y.size()));
  }
  return (x - y).squaredNorm();
}

/// log of k/(2-k) with k = exp(-d2 / (2 sigma^2)).
inline double log_local_kernel_from_sqdist(double d2, double sigma) {
  const double log_k = -d2 / (2.0 * sigma * sigma);
  return log_k - std::log(2.0 - std::exp(log_k));
}

/// Local similarity k/(2-k), k = exp(-|x-y|^2 / (2 sigma^2)); in (0, 1].
inline double local_kernel(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                           double sigma) {
  if (!(sigma > 0.0)) throw Error("sigma must be positive");
  return std::exp(log_local_kernel_from_sqdist(squared_distance(x, y), sigma));
}

struct GakValue {
  double log_value = -std::numeric_limits<double>::infinity();
  double value = 0.0;  // exp(log_value); underflows to 0 for long sequences
};

/// Global alignment kernel: sum over all monotone alignments of the product
/// of local kernel values. Log-space DP
///   M(i,j) = kappa(x_i, y_j) * (M(i-1,j) + M(i-1,j-1) + M(i,j-1)),
/// M(0,0) = 1 and zero on the other boundary cells.
inline GakValue gak(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double sigma) {
  if (x.rows() == 0 || y.rows() == 0) throw EmptySequence();
  if (x.cols() != y.cols()) {
    throw DimensionMismatch("sequence dimensions differ: " + std::to_string(x.cols()) + " vs " +
                            std::to_string(y.cols()));
  }
  if (!(sigma > 0.0)) throw Error("sigma must be positive");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const Eigen::Index n = x.rows();
  const Eigen::Index m = y.rows();

  std::vector<double> prev(static_cast<std::size_t>(m + 1), kNegInf);
  std::vector<double> cur(static_cast<std::size_t>(m + 1), kNegInf);
  prev[0] = 0.0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    cur[0] = kNegInf;
    for (Eigen::Index j = 1; j <= m; ++j) {
      const double up = prev[static_cast<std::size_t>(j)];
      const double diag = prev[static_cast<std::size_t>(j - 1)];
      const double left = cur[static_cast<std::size_t>(j - 1)];
      const double hi = std::max({up, diag, left});
      double lse = kNegInf;
      if (hi != kNegInf) {
        // up and left are summed first so that gak(x,y) == gak(y,x) bit for bit.
        lse = hi + std::log((std::exp(up - hi) + std::exp(left - hi)) + std::exp(diag - hi));
      }
      const double dist = (x.row(i - 1) - y.row(j - 1)).squaredNorm();
      cur[static_cast<std::size_t>(j)] = log_local_kernel_from_sqdist(dist, sigma) + lse;
    }
    std::swap(prev, cur);
  }
  GakValue g;
  g.log_value = prev[static_cast<std::size_t>(m)];
  g.value = std::exp(g.log_value);
  return g;
}

inline GakValue gak(const FeatureSequence& sx, const FeatureSequence& sy, double sigma) {
  return gak(sx.vectors, sy.vectors, sigma);
}

enum class KernelKind { gak, mean_pool_rbf };

inline std::string to_string(KernelKind k) { return k == KernelKind::gak ? "gak" : "mean_pool_rbf"; }

struct GramMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;
};

/// Normalized kernel matrix K(i,j) / sqrt(K(i,i) K(j,j)). Only the upper
/// triangle is computed, so the result is exactly symmetric.
inline GramMatrix normalized_gram(const std::vector<FeatureSequence>& seqs, KernelKind kind, double sigma,
                                  unsigned jobs = 1) {
  const auto n = static_cast<Eigen::Index>(seqs.size());
  for (const auto& s : seqs) {
    if (s.length() == 0) throw EmptySequence();
    if (s.dim() != seqs.front().dim()) throw DimensionMismatch("sequences have different dimensions");
  }
  GramMatrix g;
  for (const auto& s : seqs) g.ids.push_back(s.id());
  g.values = Eigen::MatrixXd::Identity(n, n);

  if (kind == KernelKind::mean_pool_rbf) {
    std::vector<Eigen::VectorXd> means;
    for (const auto& s : seqs) means.push_back(s.vectors.colwise().mean().transpose());
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = std::exp(-squared_distance(means[i], means[j]) / (2.0 * sigma * sigma));
        g.values(i, j) = g.values(j, i) = v;
      }
    }
    return g;
  }

  std::vector<double> self(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) self[i] = gak(seqs[i], seqs[i], sigma).log_value;

  auto fill_rows = [&](Eigen::Index first, Eigen::Index step) {
    for (Eigen::Index i = first; i < n; i += step) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double lg = gak(seqs[static_cast<std::size_t>(i)], seqs[static_cast<std::size_t>(j)], sigma).log_value;
        const double v = std::exp(lg - 0.5 * (self[static_cast<std::size_t>(i)] + self[static_cast<std::size_t>(j)]));
        g.values(i, j) = g.values(j, i) = v;
      }
    }
  };
  if (jobs <= 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(fill_rows, static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(jobs));
  }
  return g;
}

}  // namespace engage::baselines
