#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "trollscope/error.hpp"
#include "trollscope/eval.hpp"
#include "trollscope/ingest.hpp"
#include "trollscope/stats.hpp"

using namespace trollscope;
using namespace trollscope::eval;

namespace {

std::string serialize(const Corpus& c) {
  std::ostringstream out;
  ingest::write_corpus(c, out);
  return out.str();
}

features::FeatureContext context_for(std::initializer_list<const Corpus*> corpora) {
  std::vector<const Corpus*> list(corpora);
  return {features::auto_reference_time(list), sources::SourceCatalog::defaults(),
          features::LanguageTable::defaults()};
}

SynthConfig small_config(std::uint64_t seed, std::size_t n = 120) {
  SynthConfig c;
  c.seed = seed;
  c.n_troll = n;
  c.n_benign = n;
  return c;
}

}  // namespace

TEST_CASE("synthetic corpora are deterministic in the seed") {
  const auto a = synth_generate(small_config(5, 60));
  const auto b = synth_generate(small_config(5, 60));
  CHECK(serialize(a.trolls) == serialize(b.trolls));
  CHECK(serialize(a.benign) == serialize(b.benign));
  CHECK(serialize(synth_generate(small_config(6, 60)).trolls) != serialize(a.trolls));
  CHECK(a.trolls.label == Label::troll);
  CHECK(a.benign.label == Label::benign);
  CHECK(a.trolls.accounts.size() == 60);
  CHECK(a.trolls.accounts[0].account_id.starts_with("t5_"));
  CHECK(a.benign.accounts[0].account_id.starts_with("b5_"));
  for (const auto& acc : a.trolls.accounts) {
    CHECK(acc.campaign == "synth_campaign");
    CHECK_FALSE(acc.tweets.empty());
    for (std::size_t i = 1; i < acc.tweets.size(); ++i) CHECK(acc.tweets[i - 1].timestamp <= acc.tweets[i].timestamp);
    for (const auto& t : acc.tweets) CHECK(t.timestamp >= acc.creation_time);
  }
}

TEST_CASE("fake_source_fraction 1 puts every troll tweet on a fake client") {
  auto cfg = small_config(3, 50);
  cfg.troll.fake_source_fraction = 1.0;
  cfg.troll.scheduled_fraction = 0.0;
  const auto c = synth_generate(cfg);
  for (const auto& a : c.trolls.accounts)
    for (const auto& t : a.tweets) CHECK(sources::is_fake_source(t.client_name, sources::SourceCatalog::defaults()));
}

TEST_CASE("generator marginals converge to the knobs") {
  auto cfg = small_config(9, 500);
  cfg.n_benign = 10;
  const auto c = synth_generate(cfg);
  const auto m = stats::campaign_metrics(c.trolls, sources::SourceCatalog::defaults());
  CHECK(std::abs(m.scheduled_fraction - cfg.troll.scheduled_fraction) <= 0.05);
  CHECK(std::abs(m.retweet_fraction - cfg.troll.retweet_fraction) <= 0.05);
  std::size_t fake = 0, total = 0;
  for (const auto& a : c.trolls.accounts)
    for (const auto& t : a.tweets) {
      ++total;
      if (sources::is_fake_source(t.client_name, sources::SourceCatalog::defaults())) ++fake;
    }
  CHECK(std::abs(static_cast<double>(fake) / total - cfg.troll.fake_source_fraction) <= 0.05);
}

TEST_CASE("default knobs separate the classes under KS") {
  const auto c = synth_generate(small_config(11, 300));
  const Corpus* list[] = {&c.trolls, &c.benign};
  const auto ctx = context_for({&c.trolls, &c.benign});
  const auto d = features::build_dataset(list, ctx);
  const std::vector<std::string> names = {"retweet_fraction", "fraction_fake_sources"};
  const auto rows = stats::comparison_report(d, names);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    INFO(r.feature_name);
    CHECK(r.ks.p_value < 0.01);
    CHECK(r.ks.significant);
  }
}

TEST_CASE("invalid generator configs are rejected") {
  auto cfg = small_config(1);
  cfg.troll.retweet_fraction = 1.5;
  CHECK_THROWS_AS(synth_generate(cfg), DataError);
  cfg = small_config(1);
  cfg.troll.scheduled_fraction = 0.7;
  cfg.troll.fake_source_fraction = 0.4;
  CHECK_THROWS_AS(validate(cfg), DataError);
  cfg = small_config(1);
  cfg.n_troll = 0;
  CHECK_THROWS_AS(validate(cfg), DataError);
  CHECK_THROWS_AS(synth_config_from_json(R"({"troll": {"fake_source_fraction": -0.1}})"), DataError);
  CHECK_THROWS_AS(synth_config_from_json("[]"), DataError);
}

TEST_CASE("synth config json round trip") {
  auto cfg = small_config(42, 7);
  cfg.troll.hour_concentration = 0.6;
  cfg.benign.languages = {"en", "es"};
  const auto back = synth_config_from_json(synth_config_to_json(cfg));
  CHECK(synth_config_to_json(back) == synth_config_to_json(cfg));
  CHECK(back.seed == 42);
  CHECK(back.troll.hour_concentration == 0.6);
  const auto partial = synth_config_from_json(R"({"seed": 3, "troll": {"retweet_fraction": 0.9}})");
  CHECK(partial.seed == 3);
  CHECK(partial.troll.retweet_fraction == 0.9);
  CHECK(partial.troll.fake_source_fraction == default_troll_profile().fake_source_fraction);
}

TEST_CASE("leave-one-campaign protocol") {
  std::vector<Corpus> campaigns;
  for (int k = 0; k < 3; ++k) {
    auto c = synth_corpus(default_troll_profile(), 60, Label::troll, "camp" + std::to_string(k),
                          "c" + std::to_string(k) + "_", derive_seed(7, static_cast<std::uint64_t>(k)));
    campaigns.push_back(std::move(c));
  }
  auto tiny = synth_corpus(default_troll_profile(), 1, Label::troll, "tiny", "x_", 99);
  const auto benign = synth_corpus(default_benign_profile(), 100, Label::benign, "", "b_", 8);
  std::vector<const Corpus*> list = {&campaigns[0], &campaigns[1], &campaigns[2], &tiny};
  const auto ctx = context_for({&campaigns[0], &campaigns[1], &campaigns[2], &tiny, &benign});
  CrossEvalOptions opt;
  opt.n_per_class = 50;
  opt.params.n_trees = 30;
  opt.seed = 3;
  testing::WarningCapture warnings;
  const auto reports = leave_one_campaign_eval(list, benign, opt, ctx);
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) {
    REQUIRE(r.targets.size() == 3);
    std::size_t detected = 0, total = 0;
    for (const auto& t : r.targets) {
      CHECK(t.campaign != r.training_campaign);
      CHECK(t.detected <= t.total);
      CHECK(t.total == (t.campaign == "tiny" ? 1u : 60u));
      CHECK(t.rate == doctest::Approx(static_cast<double>(t.detected) / t.total));
      detected += t.detected;
      total += t.total;
    }
    CHECK(r.detected == detected);
    CHECK(r.total == total);
    CHECK(r.overall_rate >= 0.9);
  }
  CHECK(reports[0].training_campaign == "camp0");
  bool warned_tiny = false;
  for (const auto& m : warnings.messages)
    if (m.find("tiny") != std::string::npos) warned_tiny = true;
  CHECK(warned_tiny);

  const auto csv = cross_eval_csv(reports);
  CHECK(csv.find("camp0") != std::string::npos);
  CHECK_FALSE(cross_eval_summary(reports).empty());

  std::vector<const Corpus*> dup = {&campaigns[0], &campaigns[0]};
  CHECK_THROWS_AS(leave_one_campaign_eval(dup, benign, opt, ctx), DataError);
}

TEST_CASE("target accounts shared with training are never scored") {
  // camp1 contains a copy of one camp0 account, so whichever side trains
  // the copy is dropped from the other side's targets.
  auto c0 = synth_corpus(default_troll_profile(), 30, Label::troll, "camp0", "a_", 1);
  auto c1 = synth_corpus(default_troll_profile(), 30, Label::troll, "camp1", "b_", 2);
  auto shared = c0.accounts[0];
  shared.campaign = "camp1";
  c1.accounts.push_back(shared);
  const auto benign = synth_corpus(default_benign_profile(), 60, Label::benign, "", "n_", 3);
  const auto ctx = context_for({&c0, &c1, &benign});
  CrossEvalOptions opt;
  opt.n_per_class = 30;
  opt.params.n_trees = 10;
  testing::WarningCapture warnings;
  std::vector<const Corpus*> list = {&c0, &c1};
  const auto reports = leave_one_campaign_eval(list, benign, opt, ctx);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].targets[0].campaign == "camp1");
  CHECK(reports[0].targets[0].total == 30);
  CHECK(reports[1].targets[0].campaign == "camp0");
  CHECK(reports[1].targets[0].total == 29);
}

TEST_CASE("false positive evaluation") {
  const auto c = synth_generate(small_config(21, 150));
  auto ctx = context_for({&c.trolls, &c.benign});
  const auto d = features::balance_sample(c.trolls, c.benign, 150, 1, ctx);
  learn::Hyperparams p;
  p.n_trees = 30;
  const auto model = learn::train(learn::Algorithm::random_forest, d, p, 1);

  CHECK_THROWS_AS(false_positive_eval(model, c.benign, ctx), DataError);
  Corpus empty;
  empty.label = Label::benign;
  CHECK_THROWS_AS(false_positive_eval(model, empty, ctx), EmptyCorpusError);

  const auto holdout = synth_corpus(default_benign_profile(), 300, Label::benign, "", "h_", 77);
  const auto ctx2 = context_for({&c.trolls, &c.benign, &holdout});
  const auto r = false_positive_eval(model, holdout, ctx2);
  CHECK(r.total == 300);
  CHECK(r.flagged == r.flagged_ids.size());
  CHECK(r.rate <= 0.02);
  CHECK(r.rate == doctest::Approx(static_cast<double>(r.flagged) / 300));
}

TEST_CASE("in-the-wild detection") {
  const auto c = synth_generate(small_config(31, 150));
  const auto ctx = context_for({&c.trolls, &c.benign});
  const auto d = features::balance_sample(c.trolls, c.benign, 150, 1, ctx);
  learn::Hyperparams p;
  p.n_trees = 30;
  const auto model = learn::train(learn::Algorithm::random_forest, d, p, 1);
  const auto& catalog = sources::SourceCatalog::defaults();

  CHECK(parse_prefilter("fake") == Prefilter::fake_source_users);
  CHECK(parse_prefilter("none") == Prefilter::all);
  CHECK_THROWS(parse_prefilter("maybe"));

  // Benign corpus without impersonated clients: nothing passes the prefilter.
  const auto clean = synth_corpus(default_benign_profile(), 50, Label::benign, "", "w_", 5);
  auto r = detect_in_wild(model, clean, ctx, Prefilter::fake_source_users);
  CHECK(r.candidate_count == 0);
  CHECK(r.flagged.empty());
  CHECK(r.flag_rate == 0.0);

  // One tweet from the double-space Android client makes an account a candidate.
  Corpus wild = clean;
  wild.label = Label::unlabeled;
  wild.accounts[3].tweets[0].client_name = "Twitter for  Android";
  CHECK(uses_fake_source(wild.accounts[3], catalog));
  r = detect_in_wild(model, wild, ctx, Prefilter::fake_source_users);
  CHECK(r.candidate_count == 1);

  // Mixed corpus: troll-like accounts relabeled as unknown.
  Corpus mixed = c.trolls;
  mixed.label = Label::unlabeled;
  for (const auto& a : clean.accounts) mixed.accounts.push_back(a);
  r = detect_in_wild(model, mixed, ctx, Prefilter::fake_source_users);
  std::set<std::string> ids;
  for (const auto& a : mixed.accounts) ids.insert(a.account_id);
  CHECK(std::is_sorted(r.flagged.begin(), r.flagged.end()));
  for (const auto& id : r.flagged) {
    CHECK(ids.count(id));
    const auto it = std::find_if(mixed.accounts.begin(), mixed.accounts.end(),
                                 [&](const Account& a) { return a.account_id == id; });
    CHECK(uses_fake_source(*it, catalog));
  }
  CHECK(r.flagged.size() <= r.candidate_count);
  const auto again = detect_in_wild(model, mixed, ctx, Prefilter::fake_source_users);
  CHECK(again.flagged == r.flagged);
  CHECK(detect_in_wild(model, mixed, ctx, Prefilter::all).candidate_count == mixed.accounts.size());
  CHECK_FALSE(wild_report_text(r).empty());

  CHECK_THROWS_AS(detect_in_wild(model, c.trolls, ctx, Prefilter::all), DataError);
}
