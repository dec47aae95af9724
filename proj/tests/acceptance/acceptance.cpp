// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: engage_acceptance <scratch-dir>

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "engage/cli/app.hpp"
#include "engage/engage.hpp"
#include "../support/fixtures.hpp"
#include "../support/golden.hpp"
#include "../support/oracles.hpp"

namespace fs = std::filesystem;
using namespace engage;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

json oracle(const std::string& name) { return json::parse(io::read_file(fs::path(ENGAGE_TEST_DIR) / "oracles" / name)); }

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << "engage " << args.front() << " failed (" << code << "): " << err.str();
  return code;
}

// ---- 1 ----------------------------------------------------------------------

Outcome gaze_geometry() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coord(-100.0, 100.0), margin(0.0, 0.5);
  std::uniform_int_distribution<int> count(3, 12);
  const auto t0 = Clock::now();
  std::size_t trials = 0, disagreements = 0;
  while (trials < 10000) {
    std::vector<features::Point> cloud(static_cast<std::size_t>(count(rng)));
    for (auto& p : cloud) p = {coord(rng), coord(rng)};
    features::Hull hull;
    try {
      hull = features::convex_hull(cloud);
    } catch (const DegenerateInput&) {
      continue;
    }
    const features::Point g{1.6 * coord(rng), 1.6 * coord(rng)};
    const double m = margin(rng);
    disagreements += features::gaze_on_face(g, hull, m) != testkit::on_face_brute(cloud, g, m) ? 1 : 0;
    ++trials;
  }
  const double dt = seconds_since(t0);
  return {disagreements == 0 && dt < 5.0,
          std::to_string(trials) + " triples, " + std::to_string(disagreements) + " disagreements, " +
              io::format_fixed(dt, 2) + " s"};
}

// ---- 2 ----------------------------------------------------------------------

Eigen::MatrixXd random_sequence(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

Outcome gak_correctness() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> sig(0.5, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    for (Eigen::Index n = 1; n <= 4; ++n) {
      for (Eigen::Index m = 1; m <= 4; ++m) {
        const auto x = random_sequence(rng, n, 3), y = random_sequence(rng, m, 3);
        const double s = sig(rng);
        const double dp = baselines::gak(x, y, s).value;
        const double brute = testkit::gak_by_enumeration(x, y, s);
        worst = std::max(worst, std::fabs(dp - brute) / brute);
      }
    }
  }
  std::vector<baselines::FeatureSequence> seqs;
  std::uniform_int_distribution<int> len(3, 20);
  for (int i = 0; i < 10; ++i) {
    seqs.push_back({"s", "d" + std::to_string(i), "w" + std::to_string(i), random_sequence(rng, len(rng), 5)});
  }
  const auto g = baselines::normalized_gram(seqs, baselines::KernelKind::gak, 2.0).values;
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const double min_eig = es.eigenvalues().minCoeff();

  const auto a = random_sequence(rng, 100, 25), b = random_sequence(rng, 100, 25);
  double best_ms = 1e9;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = Clock::now();
    volatile double v = baselines::gak(a, b, 5.0).log_value;
    (void)v;
    best_ms = std::min(best_ms, 1000.0 * seconds_since(t0));
  }
  const bool ok = worst <= 1e-9 && min_eig >= -1e-8 && asym <= 1e-12 && best_ms < 50.0;
  std::ostringstream d;
  d << "max rel err " << worst << ", min eig " << min_eig << ", asym " << asym << ", 100x100 "
    << io::format_fixed(best_ms, 2) << " ms";
  return {ok, d.str()};
}

// ---- 3 ----------------------------------------------------------------------

Outcome golden_transcripts() {
  std::size_t same = 0;
  std::string bad;
  for (const char* a : testkit::kGoldenAblations) {
    const auto path = fs::path(ENGAGE_TEST_DIR) / "golden" / testkit::golden_name(a);
    const auto expected = fs::exists(path) ? io::read_file(path) : std::string{};
    const auto text = testkit::render_greeting(a);
    const bool markers = text.find("[You]") != std::string::npos && text.find("[Partner]") != std::string::npos &&
                         text.find("Provide your answer in the form of an integer between 1 and 7.") != std::string::npos;
    const bool gaze_ok = std::string(a).find('G') == std::string::npos ||
                         text.find("about 80% of the time") != std::string::npos;
    if (text == expected && markers && gaze_ok) ++same;
    else bad += std::string(" ") + a;
  }
  return {same == testkit::kGoldenAblations.size(),
          std::to_string(same) + "/4 ablations byte-identical" + (bad.empty() ? "" : "; mismatched:" + bad)};
}

// ---- 4 ----------------------------------------------------------------------

class OverflowingBackend : public llm::Backend {
 public:
  explicit OverflowingBackend(std::size_t max_messages) : max_(max_messages) {}
  llm::Completion complete(const llm::CompletionRequest& r) override {
    std::lock_guard lock(mu_);
    seen.push_back(r.messages);
    if (r.messages.size() > max_) throw ContextOverflow("too long");
    llm::Completion c;
    c.text = "4";
    return c;
  }
  std::string name() const override { return "overflowing"; }
  std::vector<std::vector<llm::ChatMessage>> seen;

 private:
  std::size_t max_;
  std::mutex mu_;
};

bool ends_with_experimenter(const std::vector<llm::ChatMessage>& msgs, const std::string& item) {
  if (msgs.empty()) return false;
  const auto& m = msgs.back();
  return m.role == fusion::Role::user && m.content.starts_with("[Experimenter] ") &&
         m.content.find(item) != std::string::npos && m.content.find(fusion::kPrivacyFooter) != std::string::npos;
}

Outcome truncation() {
  synth::SynthParams p;
  p.n_dyads = 2;
  p.min_turns = 110;
  p.max_turns = 130;
  std::size_t late = 0, checked = 0, lost = 0;
  double longest = 0.0;
  for (std::size_t d = 0; d < p.n_dyads; ++d) {
    const auto g = synth::generate_session(p, d);
    const auto conv = fusion::prepare_conversation(g.session, core::synchronize_timeline(g.session));
    longest = std::max(longest, conv.turns.back().start - conv.conversation_start);
    const auto& item = core::engagement_items()[d].statement;
    for (const auto& part : conv.participants) {
      for (const char* abl : {"4", "4SGF"}) {
        const auto ablation = fusion::AblationSpec::parse(abl);
        for (std::optional<std::size_t> budget : {std::optional<std::size_t>{}, std::optional<std::size_t>{4000},
                                                  std::optional<std::size_t>{1500}}) {
          fusion::TruncationOptions opt;
          opt.token_budget = budget;
          const auto kept = fusion::truncate_transcript(conv, part.wearer_id, item, ablation, opt);
          for (const auto& t : kept) late += t.start >= conv.conversation_start + 300.0 ? 1 : 0;
          const auto msgs = fusion::render_prompt(conv, part.wearer_id, item, ablation, opt);
          lost += ends_with_experimenter(msgs, item) ? 0 : 1;
          ++checked;
        }
      }
      // A budget that cannot hold a single turn is an error, never a prompt
      // without its question.
      fusion::TruncationOptions tiny;
      tiny.token_budget = 10;
      try {
        fusion::render_prompt(conv, part.wearer_id, item, fusion::AblationSpec::parse("4SGF"), tiny);
        ++lost;
      } catch (const NoTurns&) {
      }
      OverflowingBackend be(25);
      llm::QuestionnaireOptions qo;
      qo.max_overflow_retries = 40;
      std::vector<core::QuestionnaireItem> one{{"Q1", item, false}};
      const auto run = llm::run_questionnaire(be, conv, part.wearer_id, one, fusion::AblationSpec::parse("4SGF"), qo);
      lost += run.direct == 1 ? 0 : 1;
      for (const auto& msgs : be.seen) {
        lost += ends_with_experimenter(msgs, item) ? 0 : 1;
        ++checked;
      }
    }
  }
  return {late == 0 && lost == 0 && longest > 300.0,
          std::to_string(checked) + " prompts (sessions run to " + io::format_fixed(longest, 0) + " s), " +
              std::to_string(late) + " late turns, " + std::to_string(lost) + " missing experimenter messages"};
}

// ---- 5 ----------------------------------------------------------------------

Outcome fallback_parsing() {
  const std::vector<std::pair<const char*, double>> toks = {
      {"As", 0.316}, {"[", 0.283}, {"Since", 0.214}, {"I", 0.104}, {"Given", 0.042}, {"Considering", 0.007},
      {"This", 0.007}, {"Unfortunately", 0.004}, {"Ap", 0.003}, {"Due", 0.003}, {"Sorry", 0.002},
      {"Because", 0.002}, {"The", 0.001}, {"5", 0.001}, {"4", 0.001}, {"It", 0.001}, {"Without", 0.001},
      {"N", 0.001}, {"3", 0.001}, {"My", 0.001}};
  llm::Completion c;
  c.text = "As this conversation was text-based, I cannot provide a rating for eye contact";
  for (auto [t, p] : toks) c.first_token_candidates.push_back({t, p});
  const auto fb = llm::parse_rating(c);
  llm::Completion d;
  d.text = "7";
  const auto direct = llm::parse_rating(d);
  const bool ok = fb.rating == 5 && fb.source == llm::RatingSource::fallback && direct.rating == 7 &&
                  direct.source == llm::RatingSource::direct;
  return {ok, "top-20 fixture -> " + std::to_string(fb.rating.value_or(-1)) + " (" +
                  std::string(llm::to_string(fb.source)) + "), \"7\" -> " + std::to_string(direct.rating.value_or(-1)) +
                  " (" + std::string(llm::to_string(direct.source)) + ")"};
}

// ---- 6 ----------------------------------------------------------------------

Outcome confusion_accounting() {
  const auto c = eval::finish_confusion({{{{1072, 44, 52}}, {{91, 18, 33}}, {{105, 62, 325}}}});
  auto near = [](const std::optional<double>& v, double want) { return v && std::fabs(*v - want) <= 0.05; };
  const bool ok = near(c.class_accuracy[0], 91.8) && near(c.class_accuracy[1], 12.7) &&
                  near(c.class_accuracy[2], 66.1) && near(c.macro_accuracy, 56.9);
  return {ok, "class " + io::format_fixed(c.class_accuracy[0].value_or(-1), 1) + " / " +
                  io::format_fixed(c.class_accuracy[1].value_or(-1), 1) + " / " +
                  io::format_fixed(c.class_accuracy[2].value_or(-1), 1) + ", macro " +
                  io::format_fixed(c.macro_accuracy.value_or(-1), 1)};
}

// ---- 7 ----------------------------------------------------------------------

Outcome krippendorff() {
  double worst = 0.0;
  std::size_t fixtures = 0;
  for (const auto& f : oracle("alpha.json")) {
    std::vector<std::pair<int, int>> units;
    for (const auto& u : f["units"]) units.emplace_back(u[0].get<int>(), u[1].get<int>());
    for (const char* level : {"nominal", "ordinal", "interval"}) {
      const auto a = eval::krippendorff_alpha(units, eval::parse_alpha_level(level));
      worst = std::max(worst, a ? std::fabs(*a - f[level].get<double>()) : 1.0);
    }
    ++fixtures;
  }
  std::vector<std::pair<int, int>> perfect{{1, 1}, {3, 3}, {5, 5}, {7, 7}, {2, 2}};
  bool perfect_ok = true;
  for (auto level : {eval::AlphaLevel::nominal, eval::AlphaLevel::ordinal, eval::AlphaLevel::interval}) {
    const auto a = eval::krippendorff_alpha(perfect, level);
    perfect_ok = perfect_ok && a && *a == 1.0;
  }
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> r(1, 7);
  std::vector<std::pair<int, int>> noise(10000);
  for (auto& u : noise) u = {r(rng), r(rng)};
  double worst_random = 0.0;
  for (auto level : {eval::AlphaLevel::nominal, eval::AlphaLevel::ordinal, eval::AlphaLevel::interval}) {
    worst_random = std::max(worst_random, std::fabs(eval::krippendorff_alpha(noise, level).value_or(1.0)));
  }
  std::ostringstream d;
  d << fixtures << " fixtures max err " << worst << ", perfect=" << (perfect_ok ? "1.0" : "wrong")
    << ", random |alpha| max " << worst_random;
  return {fixtures == 3 && worst <= 1e-9 && perfect_ok && worst_random < 0.05, d.str()};
}

// ---- 8 ----------------------------------------------------------------------

Outcome valence_arousal() {
  std::size_t ok = 0;
  for (int r = 1; r <= 7; ++r) {
    const auto c = eval::categorize(r);
    const auto want = r <= 3 ? eval::Valence::disagree : r == 4 ? eval::Valence::neutral : eval::Valence::agree;
    ok += c.valence == want && c.arousal == std::abs(r - 4) ? 1 : 0;
  }
  bool rejects = true;
  for (int r : {0, 8}) {
    try {
      eval::categorize(r);
      rejects = false;
    } catch (const OutOfRange&) {
    }
  }
  return {ok == 7 && rejects, std::to_string(ok) + "/7 ratings mapped correctly"};
}

// ---- 9 ----------------------------------------------------------------------

Outcome cv_hygiene() {
  std::mt19937_64 rng(9);
  baselines::ModelGrid grid;
  grid.sigmas = {0.5, 2.0};
  grid.ks = {1, 3};
  std::size_t datasets = 0, folds = 0, violations = 0, redrawn = 0;
  while (datasets < 100) {
    const auto data = testkit::random_cv_dataset(rng);
    try {
      const auto f = baselines::lodo_cv(data, grid);
      violations += testkit::leakage_count(f);
      folds += f.size();
      ++datasets;
    } catch (const InsufficientNeighbors&) {
      ++redrawn;
    }
  }
  return {violations == 0, std::to_string(datasets) + " datasets, " + std::to_string(folds) + " folds, " +
                               std::to_string(violations) + " violations (" + std::to_string(redrawn) +
                               " draws without training data skipped)"};
}

// ---- 10 / 11 ----------------------------------------------------------------

struct EndToEnd {
  double seconds = 0.0;
  double rho = 0.0;
  double knn_rmse = 0.0;
  double mean_rmse = 0.0;
  std::size_t wearers = 0;
  bool ran = false;
};

EndToEnd end_to_end(const fs::path& root) {
  EndToEnd e;
  fs::remove_all(root);
  const auto data = (root / "data").string();
  const auto t0 = Clock::now();
  if (run_cli({"synth", "--dyads", "20", "--seed", "42", "--out", data}) != 0) return e;
  if (run_cli({"predict-llm", "--data", data, "--backend", "mock", "--ablation", "4SGF", "--out",
               (root / "llm").string()}) != 0) {
    return e;
  }
  if (run_cli({"predict-baseline", "--data", data, "--model", "knn", "--kernel", "gak", "--out",
               (root / "baseline").string()}) != 0) {
    return e;
  }
  if (run_cli({"eval", "--pred", (root / "llm" / "predictions_4SGF.jsonl").string(), "--pred",
               (root / "baseline" / "baseline_knn_gak_TGF.jsonl").string(), "--out", (root / "metrics.json").string()}) != 0) {
    return e;
  }
  e.seconds = seconds_since(t0);

  const auto planted = json::parse(io::read_file(root / "data" / "engagement.json"));
  std::map<std::string, bool> negative;
  for (const auto& it : core::engagement_items()) negative[it.item_id] = it.negatively_coded;
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& r : eval::parse_records(io::read_file(root / "llm" / "predictions_4SGF.jsonl"))) {
    if (!r.pred || negative.at(r.item_id)) continue;
    sums[r.wearer_id].first += *r.pred;
    ++sums[r.wearer_id].second;
  }
  std::vector<double> theta, mean_pred;
  for (const auto& [w, s] : sums) {
    theta.push_back(planted.at(w).get<double>());
    mean_pred.push_back(s.first / static_cast<double>(s.second));
  }
  e.wearers = theta.size();
  e.rho = eval::spearman(theta, mean_pred);
  const auto folds = json::parse(io::read_file(root / "baseline" / "folds_knn_gak_TGF.json"));
  e.knn_rmse = folds.at("rmse_mean").get<double>();
  e.mean_rmse = folds.at("constant_mean_rmse_mean").get<double>();
  e.ran = true;
  return e;
}

Outcome synthetic_recovery(const EndToEnd& e) {
  if (!e.ran) return {false, "pipeline did not complete"};
  const double gain = 1.0 - e.knn_rmse / e.mean_rmse;
  const bool ok = e.rho >= 0.8 && gain >= 0.15 && e.seconds < 120.0;
  return {ok, "spearman " + io::format_fixed(e.rho, 3) + " over " + std::to_string(e.wearers) + " wearers, knn rmse " +
                  io::format_fixed(e.knn_rmse, 3) + " vs mean " + io::format_fixed(e.mean_rmse, 3) + " (" +
                  io::format_fixed(100.0 * gain, 1) + "% lower), " + io::format_fixed(e.seconds, 1) + " s"};
}

Outcome determinism(const fs::path& first, const fs::path& second) {
  const auto again = end_to_end(second);
  if (!again.ran) return {false, "second run did not complete"};
  std::size_t compared = 0, differ = 0;
  for (const auto& entry : fs::recursive_directory_iterator(first)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), first);
    ++compared;
    const auto other = second / rel;
    if (!fs::exists(other) || io::read_file(entry.path()) != io::read_file(other)) ++differ;
  }
  return {differ == 0 && compared > 0,
          std::to_string(compared) + " files compared (data, predictions, folds, metrics), " + std::to_string(differ) +
              " differ"};
}

// ---- 12 ---------------------------------------------------------------------

Outcome paired_t_tests(const fs::path& root) {
  double worst_t = 0.0, worst_p = 0.0;
  std::size_t fixtures = 0;
  for (const auto& f : oracle("ttest.json")) {
    const auto a = f["a"].get<std::vector<double>>();
    const auto b = f["b"].get<std::vector<double>>();
    const auto r = eval::paired_t_test(a, b);
    worst_t = std::max(worst_t, r.t ? std::fabs(*r.t - f["t"].get<double>()) : 1.0);
    worst_p = std::max(worst_p, r.p ? std::fabs(*r.p - f["p"].get<double>()) : 1.0);
    ++fixtures;
  }
  // Residual pairing across two ablations of the synthetic run.
  const auto data = (root / "data").string();
  if (run_cli({"predict-llm", "--data", data, "--ablation", "4,4SG", "--out", (root / "llm_pairs").string()}) != 0 ||
      run_cli({"eval", "--metrics", "ttest", "--pred", (root / "llm_pairs" / "predictions_4.jsonl").string(), "--pred",
               (root / "llm_pairs" / "predictions_4SG.jsonl").string(), "--pred",
               (root / "llm" / "predictions_4SGF.jsonl").string(), "--out", (root / "ttests.json").string()}) != 0) {
    return {false, "t-test pipeline failed"};
  }
  const auto rep = json::parse(io::read_file(root / "ttests.json"));
  std::size_t pairs = 0, complete = 0;
  std::string first;
  for (const auto& t : rep.at("t_tests")) {
    ++pairs;
    if (t.contains("n") && t["n"].get<int>() > 0 && t.contains("t") && t.contains("p") && !t["t"].is_null()) {
      ++complete;
      if (first.empty()) {
        first = t["a"].get<std::string>() + " vs " + t["b"].get<std::string>() + ": n=" + std::to_string(t["n"].get<int>()) +
                " t=" + io::format_fixed(t["t"].get<double>(), 3) + " p=" + io::format_fixed(t["p"].get<double>(), 4);
      }
    }
  }
  std::ostringstream d;
  d << fixtures << " fixtures max |dt| " << worst_t << " max |dp| " << worst_p << "; " << complete << "/" << pairs
    << " ablation pairs reported (" << first << ")";
  return {fixtures == 10 && worst_t <= 1e-6 && worst_p <= 1e-6 && pairs == 3 && complete == 3, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "engage_acceptance";
  fs::create_directories(work);

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  EndToEnd e2e;
  const std::vector<Criterion> criteria = {
      {1, "gaze geometry oracle", gaze_geometry},
      {2, "global alignment kernel", gak_correctness},
      {3, "transcript golden files", golden_transcripts},
      {4, "five-minute truncation", truncation},
      {5, "fallback rating parse", fallback_parsing},
      {6, "confusion accounting", confusion_accounting},
      {7, "krippendorff alpha", krippendorff},
      {8, "valence/arousal mapping", valence_arousal},
      {9, "cross-validation hygiene", cv_hygiene},
      {10, "synthetic recovery", [&] {
         e2e = end_to_end(work / "run1");
         return synthetic_recovery(e2e);
       }},
      {11, "determinism", [&] { return determinism(work / "run1", work / "run2"); }},
      {12, "paired t-test", [&] { return paired_t_tests(work / "run1"); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (c.id < 10 ? " " : "") << c.id << "  " << c.name << ": "
              << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all 12 criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
