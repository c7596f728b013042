#include "doctest.h"
#include "support.hpp"
#include "trollscope/eval.hpp"
#include "trollscope/learners.hpp"
#include "trollscope/parallel.hpp"
#include "trollscope/stats.hpp"

using namespace trollscope;

namespace {

struct Fixture {
  eval::SynthCorpora corpora;
  std::vector<const Corpus*> list;
  features::FeatureContext ctx;
  features::Dataset dataset;

  Fixture()
      : corpora(make()),
        list{&corpora.trolls, &corpora.benign},
        ctx{features::auto_reference_time(list), sources::SourceCatalog::defaults(),
            features::LanguageTable::defaults()},
        dataset(features::balance_sample(corpora.trolls, corpora.benign, 100, 3, ctx, Exec::serial)) {
    set_threads(4);
  }

  static eval::SynthCorpora make() {
    eval::SynthConfig cfg;
    cfg.seed = 12;
    cfg.n_troll = 100;
    cfg.n_benign = 100;
    cfg.troll.retweet_fraction = 0.35;
    cfg.troll.fake_source_fraction = 0.05;
    return eval::synth_generate(cfg);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void check_same_metrics(const learn::Metrics& a, const learn::Metrics& b) {
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.f1 == b.f1);
  CHECK(a.confusion.tp == b.confusion.tp);
  CHECK(a.confusion.fp == b.confusion.fp);
  CHECK(a.confusion.tn == b.confusion.tn);
  CHECK(a.confusion.fn == b.confusion.fn);
}

}  // namespace

TEST_CASE("feature extraction") {
  const auto& f = fixture();
  const auto s = features::extract_all(f.corpora.trolls.accounts, f.ctx, Exec::serial);
  const auto p = features::extract_all(f.corpora.trolls.accounts, f.ctx, Exec::parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].account_id == p[i].account_id);
    CHECK(s[i].values == p[i].values);
  }
  const auto ds = features::build_dataset(f.list, f.ctx, Exec::serial);
  const auto dp = features::build_dataset(f.list, f.ctx, Exec::parallel);
  REQUIRE(ds.rows.size() == dp.rows.size());
  for (std::size_t i = 0; i < ds.rows.size(); ++i) CHECK(ds.rows[i].features.values == dp.rows[i].features.values);
}

TEST_CASE("forest training") {
  const auto& f = fixture();
  learn::Hyperparams p;
  p.n_trees = 40;
  const auto s = learn::train(learn::Algorithm::random_forest, f.dataset, p, 5, Exec::serial);
  const auto q = learn::train(learn::Algorithm::random_forest, f.dataset, p, 5, Exec::parallel);
  CHECK(learn::model_to_json(s) == learn::model_to_json(q));
}

TEST_CASE("cross validation and ablation") {
  const auto& f = fixture();
  learn::Hyperparams p;
  p.n_trees = 15;
  for (auto algo : {learn::Algorithm::random_forest, learn::Algorithm::knn, learn::Algorithm::linear_svm}) {
    const auto s = learn::cross_validate(algo, f.dataset, 5, 8, p, Exec::serial);
    const auto q = learn::cross_validate(algo, f.dataset, 5, 8, p, Exec::parallel);
    check_same_metrics(s.aggregate, q.aggregate);
    for (std::size_t i = 0; i < s.folds.size(); ++i) check_same_metrics(s.folds[i], q.folds[i]);
  }
  const auto s = learn::ablate_components(learn::Algorithm::decision_tree, f.dataset, 5, 2, p, Exec::serial);
  const auto q = learn::ablate_components(learn::Algorithm::decision_tree, f.dataset, 5, 2, p, Exec::parallel);
  REQUIRE(s.size() == q.size());
  for (std::size_t i = 0; i < s.size(); ++i) check_same_metrics(s[i].second.aggregate, q[i].second.aggregate);
}

TEST_CASE("comparison report") {
  const auto& f = fixture();
  std::vector<std::string> names(features::feature_names().begin(), features::feature_names().end());
  const auto s = stats::comparison_report(f.dataset, names, stats::kDefaultAlpha, Exec::serial);
  const auto q = stats::comparison_report(f.dataset, names, stats::kDefaultAlpha, Exec::parallel);
  CHECK(stats::comparison_csv(s) == stats::comparison_csv(q));
}

TEST_CASE("cross-campaign evaluation") {
  const auto& f = fixture();
  auto second = eval::synth_corpus(eval::default_troll_profile(), 40, Label::troll, "other", "o_", 4);
  std::vector<const Corpus*> campaigns = {&f.corpora.trolls, &second};
  eval::CrossEvalOptions opt;
  opt.n_per_class = 40;
  opt.params.n_trees = 10;
  const auto s = eval::leave_one_campaign_eval(campaigns, f.corpora.benign, opt, f.ctx, Exec::serial);
  const auto q = eval::leave_one_campaign_eval(campaigns, f.corpora.benign, opt, f.ctx, Exec::parallel);
  CHECK(eval::cross_eval_csv(s) == eval::cross_eval_csv(q));
}

TEST_CASE("parallel_for rethrows the first failure") {
  CHECK_THROWS_AS(parallel_for(100, Exec::parallel,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
