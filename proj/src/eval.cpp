#include "trollscope/eval.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trollscope/diagnostics.hpp"
#include "trollscope/error.hpp"
#include "trollscope/util/format.hpp"

namespace trollscope::eval {
namespace {

struct Target {
  std::string campaign;
  features::FeatureVector fv;
};

// Featurizes every account, dropping (with a warning) those whose features
// cannot be computed.
std::vector<features::FeatureVector> featurize_all(const Corpus& corpus, const features::FeatureContext& ctx,
                                                   Exec exec) {
  const auto n = corpus.accounts.size();
  std::vector<std::optional<features::FeatureVector>> slots(n);
  std::vector<std::string> errors(n);
  parallel_for(n, exec, [&](std::size_t i) {
    try {
      slots[i] = features::extract_features(corpus.accounts[i], ctx);
    } catch (const DataError& e) {
      errors[i] = e.what();
    }
  });
  std::vector<features::FeatureVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      out.push_back(std::move(*slots[i]));
    } else {
      warn("skipping account " + corpus.accounts[i].account_id + ": " + errors[i]);
    }
  }
  return out;
}

std::vector<double> score_all(const learn::TrainedModel& model, std::span<const features::FeatureVector> fvs,
                              Exec exec) {
  std::vector<double> scores(fvs.size());
  parallel_for(fvs.size(), exec, [&](std::size_t i) { scores[i] = learn::predict(model, fvs[i]).score; });
  return scores;
}

void check_model_context(const learn::TrainedModel& model, const features::FeatureContext& ctx) {
  if (!model.language_codes.empty() && model.language_codes != ctx.languages.codes()) {
    warn("language table differs from the one the model was trained with");
  }
  if (!model.catalog_digest.empty() && model.catalog_digest != ctx.catalog.digest()) {
    warn("source catalog differs from the one the model was trained with");
  }
}

}  // namespace

std::vector<CrossCampaignReport> leave_one_campaign_eval(std::span<const Corpus* const> campaigns,
                                                         const Corpus& benign, const CrossEvalOptions& options,
                                                         const features::FeatureContext& ctx, Exec exec) {
  if (campaigns.size() < 2) throw DataError("cross-campaign evaluation needs at least 2 campaigns");
  if (benign.accounts.empty()) throw EmptyCorpusError("benign corpus is empty");

  std::vector<const Corpus*> ordered(campaigns.begin(), campaigns.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Corpus* a, const Corpus* b) { return corpus_name(*a) < corpus_name(*b); });
  std::vector<std::string> names;
  for (const auto* c : ordered) names.push_back(corpus_name(*c));
  for (std::size_t i = 1; i < names.size(); ++i) {
    if (names[i] == names[i - 1]) throw DataError("duplicate campaign name '" + names[i] + "'");
  }

  std::vector<Target> targets;
  for (std::size_t c = 0; c < ordered.size(); ++c) {
    for (auto& fv : featurize_all(*ordered[c], ctx, exec)) targets.push_back({names[c], std::move(fv)});
  }

  std::vector<std::size_t> trainable;
  for (std::size_t c = 0; c < ordered.size(); ++c) {
    if (ordered[c]->accounts.size() < 2) {
      warn("campaign " + names[c] + " has fewer than 2 accounts; used as a target only");
    } else {
      trainable.push_back(c);
    }
  }

  std::vector<CrossCampaignReport> reports(trainable.size());
  std::vector<std::vector<std::string>> dropped(trainable.size());
  parallel_for(trainable.size(), exec, [&](std::size_t r) {
    const std::size_t c = trainable[r];
    const auto data = features::balance_sample(*ordered[c], benign, options.n_per_class, options.seed, ctx,
                                               Exec::serial);
    const auto model = learn::train(options.algorithm, data, options.params, options.seed, Exec::serial);
    const std::set<std::string> training(model.training_ids.begin(), model.training_ids.end());

    CrossCampaignReport& report = reports[r];
    report.training_campaign = names[c];
    std::vector<const Target*> selected;
    for (const auto& t : targets) {
      if (t.campaign == names[c]) continue;
      if (training.count(t.fv.account_id)) {
        dropped[r].push_back(t.fv.account_id);
        continue;
      }
      selected.push_back(&t);
    }
    for (const auto* t : selected) {
      if (training.count(t->fv.account_id)) {
        throw std::logic_error("target account " + t->fv.account_id + " is part of the training data");
      }
    }
    for (std::size_t c2 = 0; c2 < names.size(); ++c2) {
      if (c2 != c) report.targets.push_back({names[c2], 0, 0, 0.0});
    }
    for (const auto* t : selected) {
      auto it = std::find_if(report.targets.begin(), report.targets.end(),
                             [&](const TargetResult& x) { return x.campaign == t->campaign; });
      ++it->total;
      if (learn::predict(model, t->fv).score >= options.threshold) ++it->detected;
    }
    for (auto& t : report.targets) {
      t.rate = t.total ? static_cast<double>(t.detected) / static_cast<double>(t.total) : 0.0;
      report.detected += t.detected;
      report.total += t.total;
    }
    report.overall_rate =
        report.total ? static_cast<double>(report.detected) / static_cast<double>(report.total) : 0.0;
  });
  for (std::size_t r = 0; r < trainable.size(); ++r) {
    for (const auto& id : dropped[r]) {
      warn("account " + id + " appears in the training sample for " + reports[r].training_campaign +
           "; excluded from its targets");
    }
  }
  return reports;
}

std::string cross_eval_csv(const std::vector<CrossCampaignReport>& reports) {
  std::ostringstream out;
  out << "training_campaign,target_campaign,detected,total,rate\n";
  for (const auto& r : reports) {
    for (const auto& t : r.targets) {
      out << r.training_campaign << ',' << t.campaign << ',' << t.detected << ',' << t.total << ','
          << fmt::number(t.rate) << '\n';
    }
    out << r.training_campaign << ",all," << r.detected << ',' << r.total << ',' << fmt::number(r.overall_rate)
        << '\n';
  }
  return out.str();
}

std::string cross_eval_summary(const std::vector<CrossCampaignReport>& reports) {
  std::vector<std::vector<std::string>> rows = {{"trained on", "detected", "total", "rate"}};
  std::size_t detected = 0, total = 0;
  for (const auto& r : reports) {
    rows.push_back({r.training_campaign, std::to_string(r.detected), std::to_string(r.total),
                    fmt::fixed(r.overall_rate * 100, 1) + "%"});
    detected += r.detected;
    total += r.total;
  }
  const double rate = total ? static_cast<double>(detected) / static_cast<double>(total) : 0.0;
  rows.push_back({"(all runs)", std::to_string(detected), std::to_string(total), fmt::fixed(rate * 100, 1) + "%"});
  return fmt::aligned_table(rows);
}

FalsePositiveResult false_positive_eval(const learn::TrainedModel& model, const Corpus& holdout,
                                        const features::FeatureContext& ctx, double threshold, Exec exec) {
  if (holdout.accounts.empty()) throw EmptyCorpusError("benign holdout is empty");
  const std::set<std::string> training(model.training_ids.begin(), model.training_ids.end());
  for (const auto& a : holdout.accounts) {
    if (training.count(a.account_id)) {
      throw DataError("holdout account " + a.account_id + " was used to train the model");
    }
  }
  check_model_context(model, ctx);
  const auto fvs = featurize_all(holdout, ctx, exec);
  const auto scores = score_all(model, fvs, exec);
  FalsePositiveResult result;
  result.total = fvs.size();
  for (std::size_t i = 0; i < fvs.size(); ++i) {
    if (scores[i] >= threshold) result.flagged_ids.push_back(fvs[i].account_id);
  }
  std::sort(result.flagged_ids.begin(), result.flagged_ids.end());
  result.flagged = result.flagged_ids.size();
  result.rate = result.total ? static_cast<double>(result.flagged) / static_cast<double>(result.total) : 0.0;
  return result;
}

Prefilter parse_prefilter(std::string_view text) {
  if (text == "fake" || text == "fake_source_users") return Prefilter::fake_source_users;
  if (text == "none" || text == "all") return Prefilter::all;
  throw std::invalid_argument("unknown prefilter '" + std::string(text) + "' (expected fake or none)");
}

bool uses_fake_source(const Account& account, const sources::SourceCatalog& catalog) {
  return std::any_of(account.tweets.begin(), account.tweets.end(),
                     [&](const Tweet& t) { return sources::is_fake_source(t.client_name, catalog); });
}

WildReport detect_in_wild(const learn::TrainedModel& model, const Corpus& corpus,
                          const features::FeatureContext& ctx, Prefilter prefilter, double threshold, Exec exec) {
  if (corpus.label == Label::troll) throw DataError("in-the-wild detection expects an unlabeled or benign corpus");
  check_model_context(model, ctx);
  Corpus candidates;
  candidates.label = corpus.label;
  for (const auto& a : corpus.accounts) {
    if (prefilter == Prefilter::all || uses_fake_source(a, ctx.catalog)) candidates.accounts.push_back(a);
  }
  WildReport report;
  if (candidates.accounts.empty()) return report;
  const auto fvs = featurize_all(candidates, ctx, exec);
  const auto scores = score_all(model, fvs, exec);
  report.candidate_count = fvs.size();
  for (std::size_t i = 0; i < fvs.size(); ++i) {
    if (scores[i] >= threshold) report.flagged.push_back(fvs[i].account_id);
  }
  std::sort(report.flagged.begin(), report.flagged.end());
  report.flag_rate = report.candidate_count
                         ? static_cast<double>(report.flagged.size()) / static_cast<double>(report.candidate_count)
                         : 0.0;
  return report;
}

std::string wild_report_text(const WildReport& report) {
  std::ostringstream out;
  out << "candidates " << report.candidate_count << '\n'
      << "flagged    " << report.flagged.size() << '\n'
      << "flag rate  " << fmt::fixed(report.flag_rate * 100, 2) << "%\n";
  for (const auto& id : report.flagged) out << id << '\n';
  return out.str();
}

}  // namespace trollscope::eval
