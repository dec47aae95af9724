#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "engage/engage.hpp"
#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

using namespace engage;
using namespace engage::baselines;
using nlohmann::json;

namespace {

json oracle(const char* name) { return json::parse(io::read_file(std::string(ENGAGE_TEST_DIR) + "/oracles/" + name)); }

Eigen::MatrixXd to_matrix(const json& rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

FeatureSequence seq(const std::string& dyad, const std::string& wearer, Eigen::MatrixXd v) {
  return {"s-" + dyad, dyad, wearer, std::move(v)};
}

}  // namespace

TEST(Kernel, LocalKernelMatchesFrozenValue) {
  const auto o = oracle("kernels.json");
  Eigen::Vector2d x(0, 0), y(1, 0);
  EXPECT_NEAR(local_kernel(x, y, 1.0), o["local_unit"].get<double>(), 1e-15);
  EXPECT_DOUBLE_EQ(local_kernel(x, x, 0.3), 1.0);
  EXPECT_THROW(local_kernel(x, y, 0.0), Error);
}

TEST(Kernel, GakMatchesFrozenEnumeration) {
  const auto o = oracle("kernels.json");
  const auto g = gak(to_matrix(o["gak_x"]), to_matrix(o["gak_y"]), o["gak_sigma"].get<double>());
  EXPECT_NEAR(g.value, o["gak_value"].get<double>(), 1e-12);
  EXPECT_NEAR(testkit::gak_by_enumeration(to_matrix(o["gak_x"]), to_matrix(o["gak_y"]), 0.7), g.value, 1e-12);
}

TEST(Kernel, GakSingleFramesReduceToLocalKernel) {
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 0.1, 0.2;
  b << -0.4, 1.0;
  EXPECT_NEAR(gak(a, b, 0.8).value, local_kernel(a.row(0).transpose(), b.row(0).transpose(), 0.8), 1e-15);
}

TEST(Kernel, GakRejectsBadInput) {
  Eigen::MatrixXd a(2, 2), b(0, 2), c(2, 3);
  a.setZero();
  c.setZero();
  EXPECT_THROW(gak(a, b, 1.0), EmptySequence);
  EXPECT_THROW(gak(a, c, 1.0), DimensionMismatch);
  EXPECT_THROW(gak(a, a, -1.0), Error);
}

TEST(Kernel, LongSequencesStayFiniteInLogSpace) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  Eigen::MatrixXd a(400, 5), b(380, 5);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = n(rng);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = n(rng);
  const auto g = gak(a, b, 1.0);
  EXPECT_TRUE(std::isfinite(g.log_value));
}

TEST(Kernel, NormalizedGramIsSymmetricPsdWithUnitDiagonal) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0, 1);
  std::uniform_int_distribution<int> len(2, 9);
  std::vector<FeatureSequence> seqs;
  for (int i = 0; i < 12; ++i) {
    Eigen::MatrixXd v(len(rng), 4);
    for (Eigen::Index k = 0; k < v.size(); ++k) v.data()[k] = n(rng);
    seqs.push_back(seq("d" + std::to_string(i), "w" + std::to_string(i), v));
  }
  for (auto kind : {KernelKind::gak, KernelKind::mean_pool_rbf}) {
    const auto g = normalized_gram(seqs, kind, 1.5, 3).values;
    EXPECT_EQ(g, g.transpose());
    for (Eigen::Index i = 0; i < g.rows(); ++i) EXPECT_DOUBLE_EQ(g(i, i), 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
  }
  const auto serial = normalized_gram(seqs, KernelKind::gak, 1.5, 1).values;
  EXPECT_EQ(serial, normalized_gram(seqs, KernelKind::gak, 1.5, 4).values);
}

TEST(Models, RoundingIsHalfUpAndClamped) {
  EXPECT_EQ(round_rating(3.5), 4);
  EXPECT_EQ(round_rating(3.4999), 3);
  EXPECT_EQ(round_rating(0.2), 1);
  EXPECT_EQ(round_rating(7.6), 7);
  EXPECT_EQ(round_rating(-3.5), 1);
}

TEST(Models, KnnAveragesNearestAndKeepsOrderOnTies) {
  TargetMatrix y(4, 1);
  y << 1, 3, 6, 7;
  Eigen::VectorXd row(4);
  row << 0.2, 0.9, 0.9, 0.1;
  auto p = knn_predict(row, y, 2);
  EXPECT_DOUBLE_EQ(p.raw[0], 4.5);
  EXPECT_EQ(p.rounded[0], 5);
  p = knn_predict(row, y, 1);
  EXPECT_DOUBLE_EQ(p.raw[0], 3.0);  // tie between rows 1 and 2 keeps row 1
  EXPECT_THROW(knn_predict(row, y, 5), InsufficientNeighbors);
  EXPECT_THROW(knn_predict(row, y, 0), InsufficientNeighbors);
}

TEST(Models, KernelRidgeMatchesClosedFormAndClamps) {
  Eigen::MatrixXd k(3, 3);
  k << 1, 0.5, 0.2, 0.5, 1, 0.4, 0.2, 0.4, 1;
  TargetMatrix y(3, 2);
  y << 2, 6, 4, 5, 6, 1;
  Eigen::MatrixXd q(1, 3);
  q << 0.3, 0.6, 0.9;
  const auto preds = kernel_ridge_fit_predict(k, y, q, 0.5);
  const Eigen::RowVectorXd mean = y.colwise().mean();
  const Eigen::MatrixXd a = (k + 0.5 * Eigen::MatrixXd::Identity(3, 3)).inverse() * (y.rowwise() - mean);
  const Eigen::RowVectorXd expect = q * a + mean;
  for (int c = 0; c < 2; ++c) EXPECT_NEAR(preds[0].raw[c], std::clamp(expect(c), 1.0, 7.0), 1e-12);

  Eigen::MatrixXd far(1, 3);
  far << 0, 0, 50;
  EXPECT_DOUBLE_EQ(kernel_ridge_fit_predict(k, y, far, 0.5)[0].raw[1], 1.0);
  EXPECT_THROW(kernel_ridge_fit_predict(k, y, q, 0.0), Error);
}

TEST(Cv, SplitExcludesTestWearersFromTraining) {
  std::vector<FeatureSequence> seqs{seq("d1", "a", Eigen::MatrixXd::Zero(1, 1)), seq("d1", "b", Eigen::MatrixXd::Zero(1, 1)),
                                    seq("d2", "a", Eigen::MatrixXd::Zero(1, 1)), seq("d2", "c", Eigen::MatrixXd::Zero(1, 1)),
                                    seq("d3", "d", Eigen::MatrixXd::Zero(1, 1))};
  const auto s = split_out(seqs, {0, 1, 2, 3, 4}, "d1");
  EXPECT_EQ(s.test, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(s.train, (std::vector<std::size_t>{3, 4}));
}

TEST(Cv, GridOrderAndTieBreak) {
  ModelGrid g;
  g.sigmas = {2.0, 0.5};
  g.ks = {5, 1};
  const auto c = g.expand();
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0].sigma, 0.5);
  EXPECT_EQ(c[0].k, 1);
  EXPECT_EQ(c[3].sigma, 2.0);
  EXPECT_EQ(c[3].k, 5);
  g.ks.clear();
  EXPECT_THROW(g.expand(), Error);
}

TEST(Cv, NoLeakageOverRandomDatasets) {
  std::mt19937_64 rng(99);
  ModelGrid grid;
  grid.sigmas = {0.5, 2.0};
  grid.ks = {1, 2};
  std::size_t done = 0, leaks = 0;
  while (done < 30) {
    const auto data = testkit::random_cv_dataset(rng);
    try {
      const auto folds = lodo_cv(data, grid);
      leaks += testkit::leakage_count(folds);
      leaks += testkit::leakage_count(constant_mean_cv(data));
      ++done;
    } catch (const InsufficientNeighbors&) {
      // every training wearer reappears in the held-out dyad; draw again
    }
  }
  EXPECT_EQ(leaks, 0u);
}

TEST(Cv, RecoversAPlantedSignalAndBeatsTheMean) {
  // Sequences whose values encode the target; KNN should beat the mean.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0, 0.05);
  CvDataset data;
  data.item_ids = {"Q1"};
  data.tag = "baseline-test";
  std::vector<double> ys;
  for (int d = 0; d < 8; ++d) {
    for (int w = 0; w < 2; ++w) {
      const double y = 1 + (d * 2 + w) % 7;
      Eigen::MatrixXd v(3, 1);
      for (int r = 0; r < 3; ++r) v(r, 0) = y / 7.0 + noise(rng);
      data.sequences.push_back(seq("d" + std::to_string(d), "w" + std::to_string(d * 2 + w), v));
      ys.push_back(y);
    }
  }
  data.targets = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  ModelGrid grid;
  grid.sigmas = {0.05, 0.2};
  grid.ks = {1, 2};
  const auto folds = lodo_cv(data, grid, {2});
  const auto ref = constant_mean_cv(data);
  EXPECT_EQ(folds.size(), 8u);
  EXPECT_LT(mean_fold_rmse(folds), 0.85 * mean_fold_rmse(ref));
  EXPECT_EQ(fold_records(folds).size(), 16u);
  for (const auto& f : folds) EXPECT_EQ(f.records.front().source, "knn");
  EXPECT_EQ(ref.front().records.front().source, "mean");

  grid.model = ModelKind::kernel_ridge;
  grid.lambdas = {0.01, 0.1};
  const auto ridge = lodo_cv(data, grid);
  EXPECT_LT(mean_fold_rmse(ridge), mean_fold_rmse(ref));
}

TEST(Cv, TooFewDyads) {
  CvDataset data;
  data.item_ids = {"Q1"};
  data.sequences = {seq("d1", "a", Eigen::MatrixXd::Ones(1, 1)), seq("d2", "b", Eigen::MatrixXd::Ones(1, 1))};
  data.targets = Eigen::MatrixXd::Ones(2, 1);
  EXPECT_THROW(lodo_cv(data, ModelGrid{}), TooFewDyads);
  EXPECT_THROW(constant_mean_cv(data), TooFewDyads);
}

TEST(Features, SequencesFollowTheWearersOwnTurns) {
  const auto s = testkit::greeting_session();
  const auto conv = fusion::prepare_conversation(s, core::synchronize_timeline(s));
  EmbeddingTable emb = parse_embeddings(
      "dim=2\n{\"session\":\"greeting\",\"wearer\":\"alice\",\"turn_index\":0,\"vector\":[0.5,-1]}\n");
  const auto a = build_sequence(conv, "d", "alice", Modalities::parse("TGF"), &emb);
  ASSERT_EQ(a.length(), 1);
  ASSERT_EQ(a.dim(), 11);
  EXPECT_EQ(a.vectors(0, 0), 0.5);
  EXPECT_EQ(a.vectors(0, 2 + static_cast<int>(features::EmotionLabel::happy)), 1.0);
  EXPECT_DOUBLE_EQ(a.vectors(0, 10), 0.8);
  EXPECT_THROW(build_sequence(conv, "d", "bob", Modalities::parse("T"), &emb), Error);
  const auto b = build_sequence(conv, "d", "bob", Modalities::parse("G"), nullptr);
  EXPECT_DOUBLE_EQ(b.vectors(0, 0), 0.8);
  EXPECT_EQ(build_sequence(conv, "d", "bob", Modalities::parse("G"), nullptr, 1.0).length(), 0);
  EXPECT_EQ(Modalities::parse("FT").tag(), "TF");
  EXPECT_THROW(Modalities::parse("X"), Error);
}

TEST(Features, EmbeddingFileValidation) {
  EXPECT_THROW(parse_embeddings("3\n"), SchemaViolation);
  EXPECT_THROW(parse_embeddings("dim=2\n{\"session\":\"s\",\"wearer\":\"w\",\"turn_index\":0,\"vector\":[1]}\n"),
               SchemaViolation);
  const auto t = parse_embeddings("dim=1\n{\"session\":\"s\",\"wearer\":\"w\",\"turn_index\":3,\"vector\":[2]}\n");
  EXPECT_EQ(parse_embeddings(embeddings_to_text(t)).vectors, t.vectors);
}
