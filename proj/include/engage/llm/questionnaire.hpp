#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "engage/core/parallel.hpp"
#include "engage/core/types.hpp"
#include "engage/eval/records.hpp"
#include "engage/fusion/render.hpp"
#include "engage/llm/parse.hpp"
#include "engage/llm/types.hpp"

namespace engage::llm {

struct QuestionnaireOptions {
  std::string model_id = "gpt-4-0613";
  double temperature = 0.0;
  int max_tokens = 50;
  int top_logprobs = 20;
  fusion::TruncationOptions truncation;
  int max_overflow_retries = 3;
  double overflow_shrink = 0.9;  // token budget multiplier per overflow
  bool requery_for_logprobs = true;
  unsigned jobs = 1;
};

struct QuestionnaireRun {
  std::vector<eval::PredictionRecord> records;  // in item order
  std::size_t direct = 0;
  std::size_t fallback = 0;
  std::size_t failed = 0;
  std::size_t overflow_retries = 0;
  std::vector<std::string> errors;  // "item_id: message" for failed items

  nlohmann::json summary() const {
    return {{"summary",
             {{"records", records.size()},
              {"direct", direct},
              {"fallback", fallback},
              {"failed", failed},
              {"overflow_retries", overflow_retries}}}};
  }
};

namespace detail {

struct ItemResult {
  eval::PredictionRecord record;
  std::size_t overflow_retries = 0;
  std::string error;
};

inline ItemResult ask_item(Backend& backend, const fusion::Conversation& conv, const std::string& simulated,
                           const core::QuestionnaireItem& item, const fusion::AblationSpec& ablation,
                           const QuestionnaireOptions& opt, const fusion::EmotionLexicon& lex) {
  ItemResult out;
  auto& rec = out.record;
  rec.session_id = conv.session_id;
  rec.wearer_id = simulated;
  rec.item_id = item.item_id;
  rec.ablation = ablation.tag();
  rec.source = "failed";

  CompletionRequest req;
  req.temperature = opt.temperature;
  req.max_tokens = opt.max_tokens;
  req.want_top_logprobs = opt.top_logprobs;
  req.model_id = opt.model_id;

  auto trunc = opt.truncation;
  try {
    std::optional<Completion> completion;
    for (int attempt = 0;; ++attempt) {
      req.messages = fusion::render_prompt(conv, simulated, item.statement, ablation, trunc, lex);
      try {
        completion = backend.complete(req);
        break;
      } catch (const ContextOverflow&) {
        if (attempt >= opt.max_overflow_retries) throw;
        ++out.overflow_retries;
        const auto current = fusion::estimate_tokens(req.messages, trunc.estimator);
        trunc.token_budget = static_cast<std::size_t>(static_cast<double>(current) * opt.overflow_shrink);
      }
    }
    RatingOutcome outcome;
    try {
      outcome = parse_rating(*completion);
    } catch (const NoNumericResponse&) {
      if (!opt.requery_for_logprobs || !completion->first_token_candidates.empty()) throw;
      // Backend gave no candidates with the first answer: ask once more for a
      // single token with its distribution.
      auto one = req;
      one.max_tokens = 1;
      outcome = parse_rating(backend.complete(one));
      outcome.source = RatingSource::fallback;
    }
    rec.pred = outcome.rating;
    rec.pred_raw = static_cast<double>(*outcome.rating);
    rec.source = std::string(to_string(outcome.source));
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace detail

/// One independent chat per item; the transcript is the same for every item,
/// only the experimenter message changes. Per-item failures are recorded and
/// counted, never thrown.
inline QuestionnaireRun run_questionnaire(Backend& backend, const fusion::Conversation& conv,
                                          const std::string& simulated,
                                          std::span<const core::QuestionnaireItem> items,
                                          const fusion::AblationSpec& ablation, const QuestionnaireOptions& opt = {},
                                          const core::EngagementTruth* truth = nullptr,
                                          const fusion::EmotionLexicon& lex = fusion::EmotionLexicon::builtin()) {
  if (items.empty()) throw Error("questionnaire has no items");
  conv.index_of(simulated);

  std::vector<detail::ItemResult> results(items.size());
  core::parallel_for(items.size(), opt.jobs, [&](std::size_t i) {
    results[i] = detail::ask_item(backend, conv, simulated, items[i], ablation, opt, lex);
  });

  QuestionnaireRun run;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& r = results[i];
    if (truth) r.record.truth = truth->response(simulated, items[i].item_id);
    run.overflow_retries += r.overflow_retries;
    if (r.record.source == "direct") ++run.direct;
    else if (r.record.source == "fallback") ++run.fallback;
    else {
      ++run.failed;
      run.errors.push_back(items[i].item_id + ": " + r.error);
    }
    run.records.push_back(std::move(r.record));
  }
  return run;
}

}  // namespace engage::llm
