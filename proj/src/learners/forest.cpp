#include <cmath>

#include "detail.hpp"

namespace trollscope::learn {

std::vector<std::size_t> bootstrap_rows(std::size_t n, Rng& rng) {
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
  return rows;
}

namespace detail {

int forest_max_features(const Hyperparams& params, std::size_t cols) {
  if (params.max_features > 0) return params.max_features;
  return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(cols)))));
}

// Tree t draws its bootstrap rows and its split columns from the stream
// derive_seed(seed, t), so tree-level parallelism cannot change the model.
ForestPayload fit_forest(const TrainingSet& data, const Hyperparams& params, std::uint64_t seed, Exec exec) {
  ForestPayload forest;
  const auto n_trees = static_cast<std::size_t>(std::max(params.n_trees, 1));
  forest.trees.resize(n_trees);
  const TreeOptions options{forest_max_features(params, data.x.cols()), params.max_depth, params.min_samples_leaf};
  const auto ranks = ColumnRanks::build(data.x);
  parallel_for(n_trees, exec, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const auto rows = bootstrap_rows(data.size(), rng);
    forest.trees[t] = grow_tree(data, ranks, rows, options, &rng);
  });
  return forest;
}

double forest_score(const ForestPayload& forest, std::span<const double> row) {
  std::size_t votes = 0;
  for (const auto& tree : forest.trees) {
    if (tree.predict(row) >= 0.5) ++votes;
  }
  return static_cast<double>(votes) / static_cast<double>(forest.trees.size());
}

std::vector<double> forest_importances(const ForestPayload& forest, std::size_t cols) {
  std::vector<double> total(cols, 0.0);
  for (const auto& tree : forest.trees) {
    const auto dec = tree_impurity_decrease(tree, cols);
    const double root = tree.nodes.empty() ? 0.0 : tree.nodes.front().samples;
    if (root <= 0) continue;
    for (std::size_t c = 0; c < cols; ++c) total[c] += dec[c] / root;
  }
  double sum = 0.0;
  for (double v : total) sum += v;
  if (sum > 0) {
    for (double& v : total) v /= sum;
  }
  return total;
}

}  // namespace detail
}  // namespace trollscope::learn
