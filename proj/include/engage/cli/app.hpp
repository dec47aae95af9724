#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "engage/cli/pipeline.hpp"
#include "engage/core/instrument.hpp"
#include "engage/core/validate.hpp"
#include "engage/eval/report.hpp"
#include "engage/llm/remote.hpp"
#include "engage/synth/generator.hpp"
#include "engage/synth/mock_backend.hpp"

namespace engage::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Flags shared by several subcommands; see RunConfig in the README.
struct RunConfig {
  std::vector<std::string> sessions;
  std::string data;
  std::vector<std::string> ablations{"4SGF"};
  std::string backend = "mock";
  std::string model_id = "gpt-4-0613";
  std::string endpoint = "https://api.openai.com";
  double truncate_seconds = 300.0;
  std::optional<std::size_t> token_budget;
  std::uint64_t seed = 42;
  std::string out;
  std::string metrics = "all";
  double requests_per_minute = 0.0;
  unsigned jobs = 1;
  std::string item_file;
  double refusal_rate = 0.0;
  int max_tokens = 50;

  std::size_t dyads = 20;
  std::size_t embedding_dim = 16;

  std::string wearer;

  std::string modalities = "TGF";
  std::string model = "knn";
  std::string kernel = "gak";
  std::vector<double> sigmas;
  std::vector<int> ks{1, 3, 5, 7};
  std::vector<double> lambdas{0.01, 0.1, 1.0, 10.0};

  std::vector<std::string> predictions;
  std::string report;
  std::string alpha_exact = "interval";
  std::string alpha_valence = "nominal";
  std::string alpha_arousal = "interval";
  bool signed_residuals = false;
  bool reverse_code = false;
  std::string item_grouping = "ablation";
};

namespace detail {

inline std::vector<core::QuestionnaireItem> items_from(const RunConfig& c) {
  if (c.item_file.empty()) return core::engagement_items();
  return core::load_items(c.item_file);
}

inline std::string jsonl(const std::vector<eval::PredictionRecord>& recs, const json& footer) {
  return eval::records_to_jsonl(recs) + footer.dump() + "\n";
}

/// Turns a config document into flags for the named subcommand, skipping any
/// flag already present on the command line.
inline std::vector<std::string> config_args(const json& cfg, const CLI::App& sub, const std::vector<std::string>& given) {
  std::vector<std::string> out;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (!sub.get_option_no_throw(flag)) continue;
    const bool present = std::any_of(given.begin(), given.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
      continue;
    }
    std::string v;
    auto scalar = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    if (value.is_array()) {
      for (const auto& x : value) v += (v.empty() ? "" : ",") + scalar(x);
    } else {
      v = scalar(value);
    }
    out.push_back(flag);
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

class App {
 public:
  App(std::ostream& out, std::ostream& err) : out_(out), err_(err) { build(); }

  int run(std::vector<std::string> args) {
    // args excludes the program name.
    try {
      apply_config(args);
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app_.parse(std::move(rev));
    } catch (const CLI::CallForHelp&) {
      out_ << app_.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app_.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n\n" << app_.help();
      return kUsage;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return kUsage;
    }
    try {
      return dispatch_();
    } catch (const Error& e) {
      err_ << "error: " << e.what() << "\n";
      return kFailure;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return kFailure;
    }
  }

 private:
  void build() {
    app_.name("engage");
    app_.description("Multimodal engagement prediction: synthesize, fuse, predict, evaluate.");
    app_.require_subcommand(1);
    app_.set_help_all_flag("--help-all", "Expand all help");
    app_.add_option("--config", config_file_, "JSON file with default flag values");

    auto* v = app_.add_subcommand("validate", "Check session files and report problems");
    v->add_option("--session", cfg_.sessions, "Session directory or dataset root")->required();
    v->add_option("--out", cfg_.out, "Write the validation report (JSON) here");
    v->add_option("--jobs", cfg_.jobs);
    v->callback([this] { dispatch_ = [this] { return cmd_validate(); }; });

    auto* s = app_.add_subcommand("synth", "Generate synthetic sessions with planted engagement");
    s->add_option("--dyads", cfg_.dyads)->check(CLI::PositiveNumber);
    s->add_option("--seed", cfg_.seed);
    s->add_option("--embedding-dim", cfg_.embedding_dim)->check(CLI::PositiveNumber);
    s->add_option("--out", cfg_.out)->required();
    s->add_option("--jobs", cfg_.jobs);
    s->callback([this] { dispatch_ = [this] { return cmd_synth(); }; });

    auto* f = app_.add_subcommand("fuse", "Render the multimodal transcript for every item");
    f->add_option("--session", cfg_.sessions, "Session directory")->required()->expected(1);
    f->add_option("--ablation", cfg_.ablations)->expected(1);
    f->add_option("--wearer", cfg_.wearer, "Simulated wearer (id or speaker label)")->required();
    f->add_option("--item-file", cfg_.item_file);
    f->add_option("--truncate-seconds", cfg_.truncate_seconds);
    f->add_option("--token-budget", cfg_.token_budget);
    f->add_option("--out", cfg_.out)->required();
    f->callback([this] { dispatch_ = [this] { return cmd_fuse(); }; });

    auto* p = app_.add_subcommand("predict-llm", "Ask a chat model to answer the questionnaire");
    p->add_option("--data", cfg_.data, "Dataset root or session directory")->required();
    p->add_option("--ablation", cfg_.ablations)->delimiter(',');
    p->add_option("--backend", cfg_.backend)->check(CLI::IsMember({"mock", "remote"}));
    p->add_option("--model", cfg_.model_id);
    p->add_option("--endpoint", cfg_.endpoint);
    p->add_option("--rpm", cfg_.requests_per_minute, "Request ceiling per minute (remote)");
    p->add_option("--truncate-seconds", cfg_.truncate_seconds);
    p->add_option("--token-budget", cfg_.token_budget);
    p->add_option("--max-tokens", cfg_.max_tokens);
    p->add_option("--item-file", cfg_.item_file);
    p->add_option("--refusal-rate", cfg_.refusal_rate, "Mock only")->check(CLI::Range(0.0, 1.0));
    p->add_option("--seed", cfg_.seed);
    p->add_option("--jobs", cfg_.jobs);
    p->add_option("--out", cfg_.out)->required();
    p->callback([this] { dispatch_ = [this] { return cmd_predict_llm(); }; });

    auto* b = app_.add_subcommand("predict-baseline", "Kernel baseline with leave-one-dyad-out CV");
    b->add_option("--data", cfg_.data)->required();
    b->add_option("--modalities", cfg_.modalities, "Subset of T (text), G (gaze), F (face)");
    b->add_option("--model", cfg_.model)->check(CLI::IsMember({"knn", "kernel_ridge"}));
    b->add_option("--kernel", cfg_.kernel)->check(CLI::IsMember({"gak", "mean_pool_rbf"}));
    b->add_option("--sigmas", cfg_.sigmas, "Bandwidths (default: derived from the data)")->delimiter(',');
    b->add_option("--ks", cfg_.ks)->delimiter(',');
    b->add_option("--lambdas", cfg_.lambdas)->delimiter(',');
    b->add_option("--truncate-seconds", cfg_.truncate_seconds);
    b->add_option("--item-file", cfg_.item_file);
    b->add_option("--seed", cfg_.seed);
    b->add_option("--jobs", cfg_.jobs);
    b->add_option("--out", cfg_.out)->required();
    b->callback([this] { dispatch_ = [this] { return cmd_predict_baseline(); }; });

    auto* e = app_.add_subcommand("eval", "Compute metrics over prediction files");
    e->add_option("--pred", cfg_.predictions)->required();
    e->add_option("--metrics", cfg_.metrics, "rmse,alpha,valence,ttest,items or all");
    e->add_option("--alpha-exact", cfg_.alpha_exact);
    e->add_option("--alpha-valence", cfg_.alpha_valence);
    e->add_option("--alpha-arousal", cfg_.alpha_arousal);
    e->add_flag("--signed-residuals", cfg_.signed_residuals, "t-tests on signed instead of absolute residuals");
    e->add_flag("--reverse-code", cfg_.reverse_code, "Flip negatively coded items before scoring");
    e->add_option("--item-file", cfg_.item_file);
    e->add_option("--item-grouping", cfg_.item_grouping)->check(CLI::IsMember({"ablation", "ablation_fold"}));
    e->add_option("--out", cfg_.out, "Report file (default: standard output)");
    e->callback([this] { dispatch_ = [this] { return cmd_eval(); }; });

    auto* r = app_.add_subcommand("report", "Render metric tables and a plot");
    r->add_option("--report", cfg_.report, "Metric report from eval");
    r->add_option("--pred", cfg_.predictions, "Prediction files (instead of --report)");
    r->add_option("--out", cfg_.out)->required();
    r->callback([this] { dispatch_ = [this] { return cmd_report(); }; });
  }

  void apply_config(std::vector<std::string>& args) {
    // The flag may sit before or after the subcommand; it is consumed here so
    // the parser never sees it.
    std::string path;
    for (std::size_t i = 0; i < args.size();) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
    if (path.empty()) return;
    const auto cfg = json::parse(io::read_file(path));
    if (!cfg.is_object()) throw Error("config file must hold a JSON object");
    for (std::size_t i = 0; i < args.size(); ++i) {
      const CLI::App* sub = app_.get_subcommand_no_throw(args[i]);
      if (!sub) continue;
      const auto extra = detail::config_args(cfg, *sub, args);
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(i) + 1, extra.begin(), extra.end());
      return;
    }
  }

  std::vector<pipeline::PreparedSession> load_data() const {
    return pipeline::prepare_all(pipeline::find_sessions(cfg_.data), cfg_.jobs);
  }

  int cmd_validate() {
    json rep = json::array();
    bool failed = false;
    for (const auto& root : cfg_.sessions) {
      for (const auto& dir : pipeline::find_sessions(root)) {
        json entry{{"session", dir.string()}};
        try {
          const auto s = core::load_session(dir);
          const auto r = core::validate_session(s);
          json w = json::array(), e = json::array();
          for (const auto& i : r.warnings) w.push_back({{"code", i.code}, {"message", i.message}});
          for (const auto& i : r.errors) e.push_back({{"code", i.code}, {"message", i.message}});
          entry["warnings"] = w;
          entry["errors"] = e;
          out_ << dir.string() << ": " << (r.ok() ? "ok" : "FAILED") << " (" << r.errors.size() << " errors, "
               << r.warnings.size() << " warnings)\n";
          for (const auto& i : r.errors) out_ << "  error " << i.code << ": " << i.message << "\n";
          for (const auto& i : r.warnings) out_ << "  warning " << i.code << ": " << i.message << "\n";
          failed |= !r.ok();
        } catch (const Error& ex) {
          entry["errors"] = json::array({{{"code", "load"}, {"message", ex.what()}}});
          out_ << dir.string() << ": FAILED\n  error load: " << ex.what() << "\n";
          failed = true;
        }
        rep.push_back(std::move(entry));
      }
    }
    if (!cfg_.out.empty()) io::write_file(cfg_.out, rep.dump(2) + "\n");
    return failed ? kFailure : kOk;
  }

  int cmd_synth() {
    synth::SynthParams p;
    p.n_dyads = cfg_.dyads;
    p.seed = cfg_.seed;
    p.embedding_dim = cfg_.embedding_dim;
    const fs::path root = cfg_.out;
    std::vector<synth::GeneratedSession> gen(p.n_dyads);
    core::parallel_for(p.n_dyads, cfg_.jobs, [&](std::size_t d) {
      gen[d] = synth::generate_session(p, d);
      synth::write_generated(gen[d], root / gen[d].session.manifest.session_id);
    });
    json planted = json::object();
    for (const auto& g : gen) {
      for (std::size_t w = 0; w < 2; ++w) planted[g.session.wearers[w].decl.wearer_id] = g.engagement[w];
    }
    io::write_file(root / "engagement.json", planted.dump(2) + "\n");
    out_ << "wrote " << gen.size() << " sessions to " << root.string() << "\n";
    return kOk;
  }

  int cmd_fuse() {
    const auto ps = pipeline::prepare_session(cfg_.sessions.front());
    const auto& conv = ps.conversation;
    const auto wearer = ps.session.wearers[ps.session.require_wearer(cfg_.wearer)].decl.wearer_id;
    const auto ablation = fusion::AblationSpec::parse(cfg_.ablations.front());
    fusion::TruncationOptions trunc;
    trunc.budget_seconds = cfg_.truncate_seconds;
    trunc.token_budget = cfg_.token_budget;
    std::string text;
    for (const auto& item : detail::items_from(cfg_)) {
      const auto msgs = fusion::render_prompt(conv, wearer, item.statement, ablation, trunc);
      json j{{"session", conv.session_id}, {"wearer", wearer}, {"ablation", ablation.tag()}, {"item", item.item_id}};
      j["messages"] = json::array();
      for (const auto& m : msgs) j["messages"].push_back(fusion::to_json(m));
      text += j.dump() + "\n";
    }
    io::write_file(cfg_.out, text);
    return kOk;
  }

  int cmd_predict_llm() {
    const auto items = detail::items_from(cfg_);
    std::unique_ptr<llm::Backend> backend;
    if (cfg_.backend == "mock") {
      synth::MockConfig mc;
      mc.refusal_rate = cfg_.refusal_rate;
      mc.seed = cfg_.seed;
      mc.items = items;
      backend = std::make_unique<synth::MockBackend>(mc);
    } else {
      llm::RemoteConfig rc;
      rc.endpoint = cfg_.endpoint;
      rc.requests_per_minute = cfg_.requests_per_minute;
      auto remote = std::make_unique<llm::RemoteBackend>(rc);
      if (!remote->has_credentials()) throw AuthError(std::string("no API key: set ") + llm::kApiKeyEnv);
      backend = std::move(remote);
    }
    const auto sessions = load_data();

    llm::QuestionnaireOptions opt;
    opt.model_id = cfg_.model_id;
    opt.max_tokens = cfg_.max_tokens;
    opt.truncation.budget_seconds = cfg_.truncate_seconds;
    opt.truncation.token_budget = cfg_.token_budget;
    opt.jobs = cfg_.jobs;

    const fs::path root = cfg_.out;
    fs::create_directories(root);
    for (const auto& code : cfg_.ablations) {
      const auto ablation = fusion::AblationSpec::parse(code);
      pipeline::LlmRunTotals totals;
      const auto before = backend->network_requests();
      const auto recs = pipeline::predict_llm(*backend, sessions, items, ablation, opt, totals);
      json footer{{"summary",
                   {{"ablation", ablation.tag()},
                    {"backend", backend->name()},
                    {"model", cfg_.model_id},
                    {"records", recs.size()},
                    {"direct", totals.direct},
                    {"fallback", totals.fallback},
                    {"failed", totals.failed},
                    {"overflow_retries", totals.overflow_retries},
                    {"network_requests", backend->network_requests() - before}}}};
      const auto file = root / ("predictions_" + ablation.tag() + ".jsonl");
      io::write_file(file, detail::jsonl(recs, footer));
      out_ << ablation.tag() << ": " << recs.size() << " records (" << totals.direct << " direct, " << totals.fallback
           << " fallback, " << totals.failed << " failed) -> " << file.string() << "\n";
      for (const auto& e : totals.errors) err_ << "  " << e << "\n";
    }
    return kOk;
  }

  int cmd_predict_baseline() {
    const auto items = detail::items_from(cfg_);
    const auto mods = baselines::Modalities::parse(cfg_.modalities);
    const auto sessions = load_data();
    auto data = pipeline::build_cv_dataset(sessions, items, mods, cfg_.truncate_seconds);

    baselines::ModelGrid grid;
    grid.model = cfg_.model == "knn" ? baselines::ModelKind::knn : baselines::ModelKind::kernel_ridge;
    grid.kernel = cfg_.kernel == "gak" ? baselines::KernelKind::gak : baselines::KernelKind::mean_pool_rbf;
    grid.sigmas = cfg_.sigmas.empty() ? pipeline::bandwidth_grid(data.sequences) : cfg_.sigmas;
    grid.ks = cfg_.ks;
    grid.lambdas = cfg_.lambdas;
    data.tag = "baseline-" + cfg_.model + "-" + mods.tag();

    baselines::CvOptions opt;
    opt.jobs = cfg_.jobs;
    const auto folds = baselines::lodo_cv(data, grid, opt);
    const auto reference = baselines::constant_mean_cv(data);

    const fs::path root = cfg_.out;
    fs::create_directories(root);
    const std::string stem = cfg_.model + "_" + cfg_.kernel + "_" + mods.tag();
    const auto recs = baselines::fold_records(folds);
    json footer{{"summary",
                 {{"model", cfg_.model},
                  {"kernel", cfg_.kernel},
                  {"modalities", mods.tag()},
                  {"folds", folds.size()},
                  {"records", recs.size()},
                  {"rmse_mean", baselines::mean_fold_rmse(folds)},
                  {"constant_mean_rmse_mean", baselines::mean_fold_rmse(reference)}}}};
    io::write_file(root / ("baseline_" + stem + ".jsonl"), detail::jsonl(recs, footer));
    json fj{{"sigmas", grid.sigmas},
            {"folds", pipeline::folds_to_json(folds)},
            {"constant_mean", pipeline::folds_to_json(reference, false)},
            {"rmse_mean", baselines::mean_fold_rmse(folds)},
            {"constant_mean_rmse_mean", baselines::mean_fold_rmse(reference)}};
    io::write_file(root / ("folds_" + stem + ".json"), fj.dump(2) + "\n");
    out_ << stem << ": " << folds.size() << " folds, mean RMSE " << io::format_fixed(baselines::mean_fold_rmse(folds), 4)
         << " (constant mean " << io::format_fixed(baselines::mean_fold_rmse(reference), 4) << ")\n";
    return kOk;
  }

  std::vector<eval::PredictionRecord> read_predictions() const {
    std::vector<eval::PredictionRecord> all;
    for (const auto& f : cfg_.predictions) {
      auto recs = eval::parse_records(io::read_file(f));
      all.insert(all.end(), recs.begin(), recs.end());
    }
    return all;
  }

  json compute(const std::vector<eval::PredictionRecord>& recs) const {
    eval::ReportOptions ro;
    ro.metrics = eval::MetricSelection::parse(cfg_.metrics);
    ro.exact_level = eval::parse_alpha_level(cfg_.alpha_exact);
    ro.valence_level = eval::parse_alpha_level(cfg_.alpha_valence);
    ro.arousal_level = eval::parse_alpha_level(cfg_.alpha_arousal);
    ro.absolute_residuals = !cfg_.signed_residuals;
    ro.item_grouping =
        cfg_.item_grouping == "ablation" ? eval::AccuracyGrouping::ablation : eval::AccuracyGrouping::ablation_fold;
    if (cfg_.reverse_code) {
      const auto items = detail::items_from(cfg_);
      return eval::compute_report(eval::reverse_code(recs, items), ro);
    }
    return eval::compute_report(recs, ro);
  }

  int cmd_eval() {
    const auto rep = compute(read_predictions());
    const auto text = rep.dump(2) + "\n";
    if (cfg_.out.empty()) out_ << text;
    else io::write_file(cfg_.out, text);
    return kOk;
  }

  int cmd_report() {
    json rep;
    if (!cfg_.report.empty()) rep = json::parse(io::read_file(cfg_.report));
    else if (!cfg_.predictions.empty()) rep = compute(read_predictions());
    else throw CLI::ValidationError("report", "one of --report or --pred is required");
    const fs::path root = cfg_.out;
    fs::create_directories(root);
    const auto text = eval::render_text(rep);
    io::write_file(root / "report.txt", text);
    io::write_file(root / "report.svg", eval::render_svg(rep));
    out_ << text;
    return kOk;
  }

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_;
  RunConfig cfg_;
  std::string config_file_;
  std::function<int()> dispatch_ = [] { return static_cast<int>(kUsage); };
};

/// Entry point shared by the engage tool and the tests. `args` excludes the
/// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  App app(out, err);
  return app.run(args);
}

}  // namespace engage::cli
