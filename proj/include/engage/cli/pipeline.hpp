#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "engage/baselines/cv.hpp"
#include "engage/baselines/features.hpp"
#include "engage/core/parallel.hpp"
#include "engage/core/session_io.hpp"
#include "engage/core/timeline.hpp"
#include "engage/fusion/render.hpp"
#include "engage/llm/questionnaire.hpp"

namespace engage::pipeline {

namespace fs = std::filesystem;

/// A loaded session with its frame timeline and annotated turns.
struct PreparedSession {
  core::Session session;
  core::FrameTimeline timeline;
  fusion::Conversation conversation;
};

/// Session directories under `root` (sorted by name), or `root` itself when
/// it holds a manifest.
inline std::vector<fs::path> find_sessions(const fs::path& root) {
  if (fs::is_regular_file(root)) return {root};
  if (fs::exists(root / "manifest.json")) return {root};
  if (!fs::is_directory(root)) throw MissingFile(root.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory() && fs::exists(e.path() / "manifest.json")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error("no session directories under " + root.string());
  return out;
}

inline PreparedSession prepare_session(const fs::path& dir, const core::SyncOptions& sync = {}) {
  PreparedSession p;
  p.session = core::load_session(dir);
  p.timeline = core::synchronize_timeline(p.session, sync);
  p.conversation = fusion::prepare_conversation(p.session, p.timeline);
  return p;
}

inline std::vector<PreparedSession> prepare_all(const std::vector<fs::path>& dirs, unsigned jobs,
                                                const core::SyncOptions& sync = {}) {
  std::vector<PreparedSession> out(dirs.size());
  core::parallel_for(dirs.size(), jobs, [&](std::size_t i) { out[i] = prepare_session(dirs[i], sync); });
  return out;
}

struct LlmRunTotals {
  std::size_t direct = 0;
  std::size_t fallback = 0;
  std::size_t failed = 0;
  std::size_t overflow_retries = 0;
  std::vector<std::string> errors;
};

/// Both wearers of every session answer every item under one ablation.
inline std::vector<eval::PredictionRecord> predict_llm(llm::Backend& backend, const std::vector<PreparedSession>& sessions,
                                                       const std::vector<core::QuestionnaireItem>& items,
                                                       const fusion::AblationSpec& ablation,
                                                       const llm::QuestionnaireOptions& opt, LlmRunTotals& totals) {
  std::vector<eval::PredictionRecord> out;
  for (const auto& ps : sessions) {
    for (const auto& p : ps.conversation.participants) {
      auto run = llm::run_questionnaire(backend, ps.conversation, p.wearer_id, items, ablation, opt,
                                        ps.session.truth ? &*ps.session.truth : nullptr);
      totals.direct += run.direct;
      totals.fallback += run.fallback;
      totals.failed += run.failed;
      totals.overflow_retries += run.overflow_retries;
      for (auto& e : run.errors) totals.errors.push_back(ps.session.manifest.session_id + "/" + p.wearer_id + " " + e);
      for (auto& r : run.records) {
        r.dyad_id = ps.session.manifest.dyad_id;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

/// Per-wearer feature sequences and questionnaire targets for the CV engine.
/// Wearers without a complete set of answers are skipped.
inline baselines::CvDataset build_cv_dataset(const std::vector<PreparedSession>& sessions,
                                             const std::vector<core::QuestionnaireItem>& items,
                                             const baselines::Modalities& mods, double budget_seconds = 300.0) {
  baselines::CvDataset data;
  data.tag = "baseline-" + mods.tag();
  for (const auto& it : items) data.item_ids.push_back(it.item_id);
  std::vector<Eigen::RowVectorXd> rows;
  for (const auto& ps : sessions) {
    const auto& m = ps.session.manifest;
    if (!ps.session.truth) continue;
    std::optional<baselines::EmbeddingTable> emb;
    if (mods.text) {
      if (!m.embedding_file) throw Error("session " + m.session_id + " names no embedding file");
      emb = baselines::load_embeddings(ps.session.directory / *m.embedding_file);
    }
    for (const auto& p : ps.conversation.participants) {
      Eigen::RowVectorXd y(static_cast<Eigen::Index>(items.size()));
      bool complete = true;
      for (std::size_t i = 0; i < items.size(); ++i) {
        const auto r = ps.session.truth->response(p.wearer_id, items[i].item_id);
        if (!r) {
          complete = false;
          break;
        }
        y(static_cast<Eigen::Index>(i)) = *r;
      }
      if (!complete) continue;
      auto seq = baselines::build_sequence(ps.conversation, m.dyad_id, p.wearer_id, mods, emb ? &*emb : nullptr,
                                           budget_seconds);
      if (seq.length() == 0) continue;
      data.sequences.push_back(std::move(seq));
      rows.push_back(std::move(y));
    }
  }
  data.targets.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) data.targets.row(static_cast<Eigen::Index>(i)) = rows[i];
  return data;
}

/// Bandwidths around median(|x - y|) * sqrt(median length) over all turn
/// vectors, scaled by each factor.
inline std::vector<double> bandwidth_grid(const std::vector<baselines::FeatureSequence>& seqs,
                                          const std::vector<double>& factors = {0.5, 1.0, 2.0}) {
  std::vector<Eigen::VectorXd> vecs;
  std::vector<double> lengths;
  for (const auto& s : seqs) {
    lengths.push_back(static_cast<double>(s.length()));
    for (Eigen::Index r = 0; r < s.length(); ++r) vecs.push_back(s.vectors.row(r).transpose());
  }
  if (vecs.size() < 2) return factors;
  // Deterministic subsample keeps this quadratic step small.
  const std::size_t stride = std::max<std::size_t>(1, vecs.size() / 400);
  std::vector<double> d;
  for (std::size_t i = 0; i < vecs.size(); i += stride) {
    for (std::size_t j = i + stride; j < vecs.size(); j += stride) d.push_back((vecs[i] - vecs[j]).norm());
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.empty() ? 1.0 : v[v.size() / 2];
  };
  const double base = median(d) * std::sqrt(median(lengths));
  std::vector<double> out;
  for (double f : factors) out.push_back(base > 0.0 ? f * base : f);
  return out;
}

inline nlohmann::json folds_to_json(const std::vector<baselines::FoldResult>& folds, bool with_model = true) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : folds) {
    nlohmann::json j{{"held_out_dyad", f.held_out_dyad},
                     {"rmse", f.rmse},
                     {"inner_rmse", f.inner_rmse},
                     {"train_dyads", f.train_dyads},
                     {"train_wearers", f.train_wearers},
                     {"test_wearers", f.test_wearers}};
    if (!with_model) {
      arr.push_back(std::move(j));
      continue;
    }
    j["chosen"] = {{"model", baselines::to_string(f.chosen.model)},
                   {"kernel", baselines::to_string(f.chosen.kernel)},
                   {"sigma", f.chosen.sigma}};
    if (f.chosen.model == baselines::ModelKind::knn) j["chosen"]["k"] = f.chosen.k;
    else j["chosen"]["lambda"] = f.chosen.lambda;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace engage::pipeline
