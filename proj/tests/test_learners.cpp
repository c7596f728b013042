#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "support.hpp"
#include "trollscope/error.hpp"
#include "trollscope/learners.hpp"

using namespace trollscope;
using namespace trollscope::learn;

namespace {

features::Dataset empty_dataset() {
  return features::make_empty_dataset(
      {1500000000, sources::SourceCatalog::defaults(), features::LanguageTable::defaults()});
}

void add_row(features::Dataset& d, const features::FeatureValues& v, Label label) {
  features::DatasetRow r;
  r.features.account_id = "r" + std::to_string(d.rows.size());
  r.features.values = v;
  r.label = label;
  r.provenance = label == Label::troll ? "camp" : "benign";
  d.rows.push_back(std::move(r));
}

// Trolls differ from benign rows in `signal` columns; every column in `noise`
// is uniform noise for both classes; the rest stay zero.
features::Dataset make_dataset(std::size_t n_per_class, std::uint64_t seed, const std::vector<std::size_t>& signal,
                               const std::vector<std::size_t>& noise, double gap = 1.0) {
  auto d = empty_dataset();
  Rng rng(seed);
  for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
    const bool troll = i % 2 == 0;
    features::FeatureValues v{};
    for (auto c : noise) v[c] = rng.uniform();
    for (auto c : signal) v[c] = rng.uniform() + (troll ? gap : 0.0);
    add_row(d, v, troll ? Label::troll : Label::benign);
  }
  return d;
}

std::vector<std::size_t> all_columns() {
  std::vector<std::size_t> c(features::kFeatureCount);
  std::iota(c.begin(), c.end(), 0);
  return c;
}

std::vector<Label> labels(std::initializer_list<int> bits) {
  std::vector<Label> out;
  for (int b : bits) out.push_back(b ? Label::troll : Label::benign);
  return out;
}

void check_same_tree(const DecisionTree& a, const DecisionTree& b) {
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].feature == b.nodes[i].feature);
    CHECK(a.nodes[i].threshold == b.nodes[i].threshold);
    CHECK(a.nodes[i].left == b.nodes[i].left);
    CHECK(a.nodes[i].right == b.nodes[i].right);
    CHECK(a.nodes[i].troll_fraction == b.nodes[i].troll_fraction);
    CHECK(a.nodes[i].samples == b.nodes[i].samples);
  }
}

// Plain recursive CART used as an oracle for grow_tree.
struct ReferenceCart {
  const TrainingSet& data;
  TreeOptions options;
  DecisionTree tree;

  static double child(double ones, double n) {
    const double zeros = n - ones;
    return n - (ones * ones + zeros * zeros) / n;
  }

  void grow(int node, std::vector<std::size_t> rows, int depth) {
    const double n = static_cast<double>(rows.size());
    double trolls = 0;
    for (auto r : rows) trolls += data.y[r];
    auto& nd = tree.nodes[static_cast<std::size_t>(node)];
    nd.samples = static_cast<std::uint32_t>(rows.size());
    nd.troll_fraction = trolls / n;
    const std::size_t leaf = static_cast<std::size_t>(std::max(options.min_samples_leaf, 1));
    if (trolls == 0 || trolls == n || rows.size() < 2 * leaf || (options.max_depth > 0 && depth >= options.max_depth))
      return;
    int best_col = -1;
    double best_score = 0, best_threshold = 0;
    for (std::size_t c = 0; c < data.x.cols(); ++c) {
      std::vector<std::pair<double, int>> v;
      for (auto r : rows) v.emplace_back(data.x.at(r, c), data.y[r]);
      std::sort(v.begin(), v.end());
      double left_ones = 0;
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        left_ones += v[i].second;
        if (!(v[i].first < v[i + 1].first)) continue;
        const std::size_t nl = i + 1, nr = v.size() - nl;
        if (nl < leaf || nr < leaf) continue;
        const double score = child(left_ones, static_cast<double>(nl)) +
                             child(trolls - left_ones, static_cast<double>(nr));
        if (best_col < 0 || score < best_score) {
          double t = v[i].first + (v[i + 1].first - v[i].first) / 2.0;
          if (!(t < v[i + 1].first)) t = v[i].first;
          best_col = static_cast<int>(c);
          best_score = score;
          best_threshold = t;
        }
      }
    }
    if (best_col < 0) return;
    std::vector<std::size_t> lo, hi;
    for (auto r : rows) (data.x.at(r, static_cast<std::size_t>(best_col)) <= best_threshold ? lo : hi).push_back(r);
    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& split = tree.nodes[static_cast<std::size_t>(node)];
    split.feature = best_col;
    split.threshold = best_threshold;
    split.left = left;
    split.right = left + 1;
    grow(left, std::move(lo), depth + 1);
    grow(left + 1, std::move(hi), depth + 1);
  }

  DecisionTree run(const std::vector<std::size_t>& rows) {
    tree.nodes.emplace_back();
    grow(0, rows, 0);
    return tree;
  }
};

}  // namespace

TEST_CASE("grow_tree matches a reference CART") {
  // Mixes few-valued and continuous columns so both split searches are used.
  Rng rng(404);
  for (int trial = 0; trial < 12; ++trial) {
    TrainingSet data;
    const std::size_t n = 40 + rng.below(260);
    data.x = Matrix(n, 6);
    for (std::size_t r = 0; r < n; ++r) {
      data.x.at(r, 0) = static_cast<double>(rng.below(3));
      data.x.at(r, 1) = rng.uniform();
      data.x.at(r, 2) = static_cast<double>(rng.below(40)) / 8.0;
      data.x.at(r, 3) = 7.0;
      data.x.at(r, 4) = std::round(rng.uniform() * 1000.0);
      data.x.at(r, 5) = rng.uniform(-1.0, 1.0);
      const double signal = data.x.at(r, 0) + data.x.at(r, 1) - 1.5;
      data.y.push_back(rng.bernoulli(signal > 0 ? 0.8 : 0.2) ? 1 : 0);
    }
    const auto rows = trial % 2 ? bootstrap_rows(n, rng) : [&] {
      std::vector<std::size_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      return all;
    }();
    const TreeOptions options{0, trial % 3 == 2 ? 4 : 0, 1 + trial % 4};
    INFO("trial " << trial);
    check_same_tree(grow_tree(data, rows, options, nullptr), ReferenceCart{data, options, {}}.run(rows));
  }
}

TEST_CASE("metrics from a hand confusion matrix") {
  // TP=3 FP=1 FN=1 TN=5
  const auto pred = labels({1, 1, 1, 1, 0, 0, 0, 0, 0, 0});
  const auto truth = labels({1, 1, 1, 0, 1, 0, 0, 0, 0, 0});
  const auto m = compute_metrics(pred, truth);
  CHECK(m.confusion.tp == 3);
  CHECK(m.confusion.fp == 1);
  CHECK(m.confusion.fn == 1);
  CHECK(m.confusion.tn == 5);
  CHECK(m.precision == 0.75);
  CHECK(m.recall == 0.75);
  CHECK(m.f1 == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.accuracy == 0.8);
}

TEST_CASE("degenerate metrics") {
  auto m = compute_metrics(labels({1, 0, 1}), labels({1, 0, 1}));
  CHECK(m.accuracy == 1.0);
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
  CHECK(m.f1 == 1.0);

  m = compute_metrics(labels({0, 0, 0, 0}), labels({1, 1, 0, 0}));
  CHECK(m.accuracy == 0.5);
  CHECK(m.recall == 0.0);
  CHECK(m.precision == 0.0);
  CHECK(m.precision_undefined);
  CHECK_FALSE(m.recall_undefined);
  CHECK(m.f1 == 0.0);

  CHECK_THROWS_AS(compute_metrics(labels({1}), labels({1, 0})), DataError);
  CHECK_THROWS_AS(compute_metrics(labels({}), labels({})), DataError);
}

TEST_CASE("algorithm names and hyperparameter maps") {
  CHECK(parse_algorithm("rf") == Algorithm::random_forest);
  CHECK(parse_algorithm("dt") == Algorithm::decision_tree);
  CHECK(parse_algorithm("svm") == Algorithm::linear_svm);
  CHECK(parse_algorithm("knn") == Algorithm::knn);
  CHECK_THROWS(parse_algorithm("gbm"));
  Hyperparams p;
  p.k = 7;
  p.svm_c = 0.1;
  p.max_depth = 4;
  const auto back = Hyperparams::from_map(p.to_map());
  CHECK(back.k == 7);
  CHECK(back.svm_c == 0.1);
  CHECK(back.max_depth == 4);
  CHECK(back.n_trees == 100);
  auto bad = p.to_map();
  bad["k"] = "-1";
  CHECK_THROWS_AS(Hyperparams::from_map(bad), DataError);
}

TEST_CASE("decision tree fits a separable set exactly") {
  const auto d = make_dataset(50, 1, {43}, {0, 1, 2});
  const auto model = train(Algorithm::decision_tree, d, {}, 3);
  for (const auto& r : d.rows) CHECK(predict(model, r.features).label == r.label);
  const auto& tree = std::get<DecisionTree>(model.payload);
  CHECK(tree.leaf_count() == 2);
  CHECK(tree.nodes[0].feature == 43);
}

TEST_CASE("tree ties go to the lowest feature index") {
  auto d = empty_dataset();
  for (int i = 0; i < 10; ++i) {
    features::FeatureValues v{};
    v[5] = v[20] = i < 5 ? 0.0 : 1.0;
    add_row(d, v, i < 5 ? Label::benign : Label::troll);
  }
  const auto model = train(Algorithm::decision_tree, d, {}, 1);
  CHECK(std::get<DecisionTree>(model.payload).nodes[0].feature == 5);
  CHECK(std::get<DecisionTree>(model.payload).nodes[0].threshold == 0.5);
}

TEST_CASE("max_depth and min_samples_leaf are respected") {
  const auto d = make_dataset(100, 2, {0, 1}, {2, 3}, 0.3);
  Hyperparams p;
  p.max_depth = 2;
  auto tree = std::get<DecisionTree>(train(Algorithm::decision_tree, d, p, 1).payload);
  CHECK(tree.leaf_count() <= 4);
  p = {};
  p.min_samples_leaf = 15;
  tree = std::get<DecisionTree>(train(Algorithm::decision_tree, d, p, 1).payload);
  for (const auto& n : tree.nodes)
    if (n.feature < 0) CHECK(n.samples >= 15);
}

TEST_CASE("training is deterministic in the seed") {
  const auto d = make_dataset(60, 4, {0, 9, 43}, {1, 2, 3, 20}, 0.4);
  for (auto algo : {Algorithm::random_forest, Algorithm::linear_svm, Algorithm::knn, Algorithm::decision_tree}) {
    const auto a = train(algo, d, {}, 11);
    const auto b = train(algo, d, {}, 11);
    CHECK(model_to_json(a) == model_to_json(b));
  }
  Hyperparams few;
  few.n_trees = 10;
  CHECK(model_to_json(train(Algorithm::random_forest, d, few, 11)) !=
        model_to_json(train(Algorithm::random_forest, d, few, 12)));
}

TEST_CASE("one-tree full-feature forest equals a tree grown on its bootstrap sample") {
  const auto d = make_dataset(40, 5, {0, 9}, {1, 2, 3}, 0.3);
  const auto cols = all_columns();
  const auto data = make_training_set(d, cols);
  Hyperparams p;
  p.n_trees = 1;
  p.max_features = static_cast<int>(cols.size());
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto forest = std::get<ForestPayload>(fit_payload(Algorithm::random_forest, data, p, seed, Exec::serial));
    Rng rng(derive_seed(seed, 0));
    const auto rows = bootstrap_rows(data.size(), rng);
    const auto tree = grow_tree(data, rows, TreeOptions{}, nullptr);
    REQUIRE(forest.trees.size() == 1);
    check_same_tree(forest.trees[0], tree);
  }
}

TEST_CASE("knn scores are neighbour vote fractions") {
  TrainingSet data;
  data.x = Matrix(0, 1);
  const std::pair<double, int> pts[] = {{0, 1}, {1, 1}, {2, 1}, {3, 0}, {4, 0}, {100, 0}, {101, 0}};
  for (auto [x, y] : pts) {
    const double row[] = {x};
    data.x.push_row(row);
    data.y.push_back(y);
  }
  Hyperparams p;
  p.k = 5;
  const auto payload = fit_payload(Algorithm::knn, data, p, 0, Exec::serial);
  const double q[] = {2.0};
  CHECK(payload_score(payload, p, q) == doctest::Approx(0.6));
  CHECK(prediction_from_score(0.6).label == Label::troll);
  CHECK(prediction_from_score(0.5).label == Label::troll);
  CHECK(prediction_from_score(0.4999).label == Label::benign);
  p.k = 50;
  CHECK(payload_score(payload, p, q) == doctest::Approx(3.0 / 7.0));
}

TEST_CASE("scaled learners are invariant to consistent affine rescaling") {
  // Values on a 1/8 grid keep every step exact in floating point.
  Rng rng(8);
  TrainingSet a, b;
  a.x = Matrix(0, 3);
  b.x = Matrix(0, 3);
  std::vector<std::vector<double>> queries;
  for (int i = 0; i < 80; ++i) {
    std::vector<double> row = {static_cast<double>(rng.below(80)) / 8, static_cast<double>(rng.below(80)) / 8,
                               static_cast<double>(rng.below(80)) / 8};
    const int y = row[0] + row[1] > 10 ? 1 : 0;
    a.x.push_row(row);
    for (auto& v : row) v = 4 * v + 16;
    b.x.push_row(row);
    a.y.push_back(y);
    b.y.push_back(y);
  }
  Hyperparams p;
  for (auto algo : {Algorithm::knn, Algorithm::linear_svm}) {
    const auto pa = fit_payload(algo, a, p, 3, Exec::serial);
    const auto pb = fit_payload(algo, b, p, 3, Exec::serial);
    for (int i = 0; i < 50; ++i) {
      std::vector<double> q = {static_cast<double>(rng.below(96)) / 8, static_cast<double>(rng.below(96)) / 8,
                               static_cast<double>(rng.below(96)) / 8};
      const double sa = payload_score(pa, p, q);
      for (auto& v : q) v = 4 * v + 16;
      CHECK(payload_score(pb, p, q) == doctest::Approx(sa).epsilon(1e-12));
    }
  }
}

TEST_CASE("scores stay in [0,1] and labels follow the 0.5 threshold") {
  const auto d = make_dataset(60, 6, {0, 43}, {1, 2}, 0.2);
  const auto probe = make_dataset(30, 7, {0, 43}, {1, 2}, 0.2);
  for (auto algo : {Algorithm::random_forest, Algorithm::linear_svm, Algorithm::knn, Algorithm::decision_tree}) {
    Hyperparams p;
    p.n_trees = 15;
    const auto m = train(algo, d, p, 2);
    for (const auto& r : probe.rows) {
      const auto pr = predict(m, r.features);
      CHECK(pr.score >= 0.0);
      CHECK(pr.score <= 1.0);
      CHECK((pr.label == Label::troll) == (pr.score >= 0.5));
    }
  }
}

TEST_CASE("unanimous forest scores 1") {
  const auto d = make_dataset(30, 9, {43}, {}, 2.0);
  Hyperparams p;
  p.n_trees = 20;
  const auto m = train(Algorithm::random_forest, d, p, 1);
  features::FeatureValues v{};
  v[43] = 10.0;
  CHECK(predict(m, std::span<const double>(v)).score == 1.0);
  v[43] = -10.0;
  CHECK(predict(m, std::span<const double>(v)).score == 0.0);
}

TEST_CASE("training preconditions") {
  auto one_class = empty_dataset();
  for (int i = 0; i < 5; ++i) add_row(one_class, {}, Label::troll);
  CHECK_THROWS_AS(train(Algorithm::random_forest, one_class, {}, 1), DataError);

  auto tiny = empty_dataset();
  add_row(tiny, {}, Label::troll);
  CHECK_THROWS_AS(train(Algorithm::decision_tree, tiny, {}, 1), DataError);

  auto nan = make_dataset(5, 1, {0}, {});
  nan.rows[3].features.values[7] = std::nan("");
  CHECK_THROWS_AS(train(Algorithm::knn, nan, {}, 1), DataError);

  const auto ok = make_dataset(10, 1, {0}, {});
  const auto m = train(Algorithm::knn, ok, {}, 1);
  const std::vector<double> short_row(44, 0.0);
  CHECK_THROWS_AS(predict(m, short_row), DataError);
  CHECK_THROWS_AS(gini_importance(m), DataError);
}

TEST_CASE("stratified folds") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n1 = 10 + rng.below(40), n0 = 10 + rng.below(40);
    std::vector<int> y;
    for (std::uint64_t i = 0; i < n1; ++i) y.push_back(1);
    for (std::uint64_t i = 0; i < n0; ++i) y.push_back(0);
    rng.shuffle(y);
    const auto folds = stratified_folds(y, 10, trial);
    for (int cls : {0, 1}) {
      std::vector<std::size_t> sizes(10, 0);
      for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] == cls) ++sizes[folds[i]];
      const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
      CHECK(*hi - *lo <= 1);
    }
    CHECK(stratified_folds(y, 10, trial) == folds);
  }
  std::vector<int> small = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  try {
    stratified_folds(small, 5, 1);
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("smaller") != std::string::npos);
  }
}

TEST_CASE("cross validation on a separable set") {
  const auto d = make_dataset(100, 21, {43}, {0, 1, 2, 3}, 1.5);
  Hyperparams p;
  p.n_trees = 20;
  const auto r = cross_validate(Algorithm::random_forest, d, 10, 3, p);
  CHECK(r.aggregate.accuracy == 1.0);
  CHECK(r.folds.size() == 10);
  std::size_t total = 0;
  for (const auto& f : r.folds) total += f.confusion.tp + f.confusion.fp + f.confusion.tn + f.confusion.fn;
  CHECK(total == 200);
  const auto csv = eval_report_csv(r);
  CHECK(csv.starts_with("fold,accuracy,precision,recall,f1,tp,fp,tn,fn\n"));
  CHECK(csv.find("\nall,1,1,1,1,100,0,100,0\n") != std::string::npos);
}

TEST_CASE("ablation groups") {
  const auto& groups = component_groups();
  REQUIRE(groups.size() == 5);
  CHECK(groups[0].name == "metadata");
  CHECK(groups[0].columns.size() == 10);
  CHECK(groups[1].columns.size() == 24);
  CHECK(groups[1].columns.front() == 10);
  CHECK(groups[2].columns.size() == 8);
  CHECK(groups[2].columns.front() == 34);
  CHECK(groups[3].columns == std::vector<std::size_t>{42, 43, 44});
  CHECK(groups[4].name == "all");
  CHECK(groups[4].columns.size() == 45);

  const auto d = make_dataset(40, 31, {43}, {0, 3, 12, 36}, 0.3);
  Hyperparams p;
  p.n_trees = 10;
  const auto results = ablate_components(Algorithm::random_forest, d, 5, 9, p);
  REQUIRE(results.size() == 5);
  const auto full = cross_validate(Algorithm::random_forest, d, 5, 9, p);
  CHECK(results[4].first == "all");
  CHECK(results[4].second.aggregate.accuracy == full.aggregate.accuracy);
  CHECK(results[4].second.aggregate.f1 == full.aggregate.f1);
  CHECK(results[3].second.aggregate.f1 > results[0].second.aggregate.f1);

  // Zeroing every column outside a group leaves that group's report unchanged.
  for (std::size_t g = 0; g < 4; ++g) {
    auto masked = d;
    std::vector<bool> keep(45, false);
    for (auto c : groups[g].columns) keep[c] = true;
    for (auto& r : masked.rows)
      for (std::size_t c = 0; c < 45; ++c)
        if (!keep[c]) r.features.values[c] = 0.0;
    const auto a = cross_validate(Algorithm::random_forest, d, groups[g].columns, 5, 9, p);
    const auto b = cross_validate(Algorithm::random_forest, masked, groups[g].columns, 5, 9, p);
    CHECK(a.aggregate.accuracy == b.aggregate.accuracy);
    CHECK(a.aggregate.confusion.tp == b.aggregate.confusion.tp);
    CHECK(a.aggregate.confusion.fp == b.aggregate.confusion.fp);
  }
}

TEST_CASE("gini importance") {
  const auto d = make_dataset(100, 41, {9}, {0, 1, 2, 30}, 1.5);
  Hyperparams p;
  p.n_trees = 50;
  const auto m = train(Algorithm::random_forest, d, p, 5);
  const auto imp = gini_importance(m);
  REQUIRE(imp.size() == 45);
  CHECK(std::accumulate(imp.begin(), imp.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t c = 0; c < 45; ++c) {
    CHECK(imp[c] >= 0.0);
    if (c != 9 && c != 0 && c != 1 && c != 2 && c != 30) CHECK(imp[c] == 0.0);
  }
  for (std::size_t c : {0, 1, 2, 30}) CHECK(imp[9] > 3 * imp[c]);

  // Trying every column at each split separates the classes with one cut on column 9.
  Hyperparams all = p;
  all.max_features = 45;
  const auto exact = gini_importance(train(Algorithm::random_forest, d, all, 5));
  CHECK(exact[9] == doctest::Approx(1.0).epsilon(1e-12));

  // Importances over a column subset land on the right layout positions.
  const std::vector<std::size_t> cols = {9, 30, 44};
  const auto sub = train(Algorithm::random_forest, d, cols, p, 5);
  const auto imp_sub = gini_importance(sub);
  CHECK(imp_sub[9] > imp_sub[30]);
  CHECK(imp_sub[44] == 0.0);
  CHECK(imp_sub[0] == 0.0);
}

TEST_CASE("model file round trip") {
  const auto d = make_dataset(40, 51, {0, 43}, {1, 20}, 0.3);
  testing::TempDir dir("model");
  for (auto algo : {Algorithm::random_forest, Algorithm::linear_svm, Algorithm::knn, Algorithm::decision_tree}) {
    Hyperparams p;
    p.n_trees = 7;
    p.svm_c = 0.37;
    const auto m = train(algo, d, p, 77);
    const auto path = dir / (std::string(to_string(algo)) + ".json");
    save_model(m, path);
    const auto back = load_model(path);
    CHECK(model_to_json(back) == model_to_json(m));
    CHECK(back.seed == 77);
    CHECK(back.hyperparams.svm_c == 0.37);
    CHECK(back.importances.has_value() == (algo == Algorithm::random_forest));
    for (const auto& r : d.rows) CHECK(predict(back, r.features).score == predict(m, r.features).score);
  }
  CHECK_THROWS_AS(model_from_json("{}"), SchemaError);
  CHECK_THROWS_AS(model_from_json("not json"), SchemaError);
  auto json = model_to_json(train(Algorithm::decision_tree, d, {}, 1));
  const auto pos = json.find("tweet_count");
  REQUIRE(pos != std::string::npos);
  json.replace(pos, 11, "tweet_total");
  CHECK_THROWS_AS(model_from_json(json), SchemaError);
}
