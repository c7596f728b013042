#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trollscope/features.hpp"
#include "trollscope/learners.hpp"
#include "trollscope/model.hpp"

namespace trollscope::eval {

inline constexpr double kDefaultThreshold = 0.5;

struct TargetResult {
  std::string campaign;
  std::size_t detected = 0;
  std::size_t total = 0;
  double rate = 0.0;
};

struct CrossCampaignReport {
  std::string training_campaign;
  std::vector<TargetResult> targets;  // ordered by campaign name
  std::size_t detected = 0;
  std::size_t total = 0;
  double overall_rate = 0.0;
};

struct CrossEvalOptions {
  learn::Algorithm algorithm = learn::Algorithm::random_forest;
  learn::Hyperparams params;
  std::size_t n_per_class = 500;
  std::uint64_t seed = 0;
  double threshold = kDefaultThreshold;
};

// Trains on balance_sample(C, benign) for each campaign C with at least two
// accounts and counts the accounts of every other campaign scored at or
// above the threshold. Campaigns too small to train on still serve as
// targets. Accounts whose features cannot be computed are left out of the
// targets with a warning; so are target ids that also appear in the
// training sample. Throws std::logic_error if a training id nevertheless
// reaches the target set.
std::vector<CrossCampaignReport> leave_one_campaign_eval(std::span<const Corpus* const> campaigns,
                                                         const Corpus& benign, const CrossEvalOptions& options,
                                                         const features::FeatureContext& ctx,
                                                         Exec exec = Exec::parallel);

std::string cross_eval_csv(const std::vector<CrossCampaignReport>& reports);
std::string cross_eval_summary(const std::vector<CrossCampaignReport>& reports);

struct FalsePositiveResult {
  std::size_t flagged = 0;
  std::size_t total = 0;
  double rate = 0.0;
  std::vector<std::string> flagged_ids;
};

// Fraction of benign holdout accounts scored at or above the threshold.
// Throws DataError when the holdout shares an account id with the model's
// training rows, or is empty.
FalsePositiveResult false_positive_eval(const learn::TrainedModel& model, const Corpus& holdout,
                                        const features::FeatureContext& ctx,
                                        double threshold = kDefaultThreshold, Exec exec = Exec::parallel);

enum class Prefilter { fake_source_users, all };

Prefilter parse_prefilter(std::string_view text);  // "fake" or "none"

struct WildReport {
  std::size_t candidate_count = 0;
  std::vector<std::string> flagged;  // sorted account ids
  double flag_rate = 0.0;            // flagged / candidates
};

// True when at least one tweet was posted from an impersonated client.
bool uses_fake_source(const Account& account, const sources::SourceCatalog& catalog);

// Throws DataError for a troll-labeled corpus.
WildReport detect_in_wild(const learn::TrainedModel& model, const Corpus& corpus,
                          const features::FeatureContext& ctx, Prefilter prefilter,
                          double threshold = kDefaultThreshold, Exec exec = Exec::parallel);

std::string wild_report_text(const WildReport& report);

// ---- Synthetic corpora ------------------------------------------------------

struct BehaviorProfile {
  double tweets_per_account = 40;   // Poisson mean, at least one tweet
  double scheduled_fraction = 0.0;  // share of tweets from scheduling apps
  double fake_source_fraction = 0.0;  // share from impersonated clients
  double retweet_fraction = 0.2;
  std::size_t copypasta_pool = 200;  // retweets copy texts from a shared pool
  double hour_concentration = 0.0;   // share of tweets inside the office window
  int office_start_hour = 9;         // window covers 8 hours from here (UTC)
  double mention_rate = 0.3;         // Poisson mean of @-mentions per tweet
  double words_per_tweet = 14;       // verbosity, Poisson mean
  double followers_mean = 800;
  double following_mean = 600;
  double account_age_days_mean = 900;
  double description_words = 8;
  std::vector<std::string> languages = {"en"};
};

BehaviorProfile default_troll_profile();
BehaviorProfile default_benign_profile();

struct SynthConfig {
  std::size_t n_troll = 500;
  std::size_t n_benign = 500;
  std::uint64_t seed = 1;
  std::string campaign = "synth_campaign";
  BehaviorProfile troll = default_troll_profile();
  BehaviorProfile benign = default_benign_profile();
};

// Throws DataError for counts below 1, fractions outside [0, 1], or
// scheduled + fake above 1.
void validate(const SynthConfig& config);

// JSON object with optional n_troll, n_benign, seed, campaign and troll /
// benign objects overriding individual profile fields.
SynthConfig synth_config_from_json(std::string_view text);
std::string synth_config_to_json(const SynthConfig& config);

struct SynthCorpora {
  Corpus trolls;
  Corpus benign;
};

// Account ids are t<seed>_<i> and b<seed>_<i>, so corpora generated with
// different seeds never share an account.
SynthCorpora synth_generate(const SynthConfig& config);

// A single labeled corpus from one profile.
Corpus synth_corpus(const BehaviorProfile& profile, std::size_t n, Label label, const std::string& campaign,
                    const std::string& id_prefix, std::uint64_t seed);

}  // namespace trollscope::eval
