// Serial reference vs OpenMP path for the data-parallel kernels.

#include <benchmark/benchmark.h>

#include "trollscope/eval.hpp"
#include "trollscope/features.hpp"
#include "trollscope/learners.hpp"
#include "trollscope/stats.hpp"

using namespace trollscope;

namespace {

struct Data {
  eval::SynthCorpora corpora;
  std::vector<const Corpus*> list;
  features::FeatureContext ctx;
  features::Dataset dataset;

  Data()
      : corpora(make()),
        list{&corpora.trolls, &corpora.benign},
        ctx{features::auto_reference_time(list), sources::SourceCatalog::defaults(),
            features::LanguageTable::defaults()},
        dataset(features::build_dataset(list, ctx, Exec::serial)) {}

  static eval::SynthCorpora make() {
    eval::SynthConfig cfg;
    cfg.seed = 3;
    return eval::synth_generate(cfg);
  }
};

const Data& data() {
  static const Data d;
  return d;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_Featurize(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(features::extract_all(d.corpora.trolls.accounts, d.ctx, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.corpora.trolls.accounts.size()));
}

void BM_ForestTrain(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(learn::train(learn::Algorithm::random_forest, d.dataset, {}, 1, exec_of(state)));
  }
}

void BM_CrossValidate(benchmark::State& state) {
  const auto& d = data();
  learn::Hyperparams p;
  p.n_trees = 30;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        learn::cross_validate(learn::Algorithm::random_forest, d.dataset, 10, 1, p, exec_of(state)));
  }
}

void BM_KsReport(benchmark::State& state) {
  const auto& d = data();
  const std::vector<std::string> names(features::feature_names().begin(), features::feature_names().end());
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::comparison_report(d.dataset, names, stats::kDefaultAlpha, exec_of(state)));
  }
}

}  // namespace

BENCHMARK(BM_Featurize)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestTrain)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidate)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KsReport)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
