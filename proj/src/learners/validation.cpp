#include <numeric>

#include "trollscope/error.hpp"
#include "trollscope/learners.hpp"

namespace trollscope::learn {

std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw DataError("cross-validation needs at least 2 folds");
  std::vector<std::size_t> fold(y.size(), 0);
  for (int cls : {1, 0}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == cls) members.push_back(i);
    }
    if (members.size() < folds) {
      throw DataError("class '" + std::string(cls ? "troll" : "benign") + "' has " +
                      std::to_string(members.size()) + " rows, fewer than " + std::to_string(folds) +
                      " folds; use a smaller fold count");
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i) fold[members[i]] = i % folds;
  }
  return fold;
}

EvalReport cross_validate(Algorithm algorithm, const features::Dataset& dataset, std::size_t folds,
                          std::uint64_t seed, const Hyperparams& params, Exec exec) {
  std::vector<std::size_t> cols(features::kFeatureCount);
  std::iota(cols.begin(), cols.end(), 0);
  return cross_validate(algorithm, dataset, cols, folds, seed, params, exec);
}

EvalReport cross_validate(Algorithm algorithm, const features::Dataset& dataset,
                          std::span<const std::size_t> columns, std::size_t folds, std::uint64_t seed,
                          const Hyperparams& params, Exec exec) {
  const auto all = make_training_set(dataset, columns);
  const auto assignment = stratified_folds(all.y, folds, derive_seed(seed, 0xF01D));
  std::vector<Label> predicted(all.size(), Label::benign);
  std::vector<Label> truth(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) truth[i] = all.y[i] ? Label::troll : Label::benign;

  EvalReport report;
  report.folds.resize(folds);
  parallel_for(folds, exec, [&](std::size_t f) {
    TrainingSet train_set;
    train_set.x = Matrix(0, all.x.cols());
    std::vector<std::size_t> held_out;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (assignment[i] == f) {
        held_out.push_back(i);
      } else {
        train_set.x.push_row(all.x.row(i));
        train_set.y.push_back(all.y[i]);
      }
    }
    const auto payload = fit_payload(algorithm, train_set, params, derive_seed(seed, f), Exec::serial);
    std::vector<Label> p, t;
    for (auto i : held_out) {
      predicted[i] = prediction_from_score(payload_score(payload, params, all.x.row(i))).label;
      p.push_back(predicted[i]);
      t.push_back(truth[i]);
    }
    report.folds[f] = compute_metrics(p, t);
  });
  report.aggregate = compute_metrics(predicted, truth);
  return report;
}

const std::vector<FeatureGroup>& component_groups() {
  static const std::vector<FeatureGroup> groups = [] {
    const auto range = [](std::size_t lo, std::size_t hi) {
      std::vector<std::size_t> v(hi - lo);
      std::iota(v.begin(), v.end(), lo);
      return v;
    };
    return std::vector<FeatureGroup>{
        {"metadata", range(0, 10)},
        {"temporal", range(10, 34)},
        {"stylometry", range(34, 42)},
        {"source", range(42, 45)},
        {"all", range(0, 45)},
    };
  }();
  return groups;
}

std::vector<std::pair<std::string, EvalReport>> ablate_components(Algorithm algorithm,
                                                                  const features::Dataset& dataset,
                                                                  std::size_t folds, std::uint64_t seed,
                                                                  const Hyperparams& params, Exec exec) {
  std::vector<std::pair<std::string, EvalReport>> out;
  for (const auto& g : component_groups()) {
    out.emplace_back(g.name, cross_validate(algorithm, dataset, g.columns, folds, seed, params, exec));
  }
  return out;
}

}  // namespace trollscope::learn
