#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "trollscope/features.hpp"
#include "trollscope/model.hpp"
#include "trollscope/parallel.hpp"
#include "trollscope/util/rng.hpp"

namespace trollscope::learn {

enum class Algorithm { knn, decision_tree, linear_svm, random_forest };

std::string_view to_string(Algorithm a);

// Accepts "knn", "dt", "decision_tree", "svm", "linear_svm", "rf",
// "random_forest".
Algorithm parse_algorithm(std::string_view text);

struct Hyperparams {
  int k = 5;                 // knn
  int n_trees = 100;         // random forest
  int max_features = 0;      // features tried per split; 0 = floor(sqrt(columns))
  int max_depth = 0;         // 0 = unlimited
  int min_samples_leaf = 1;
  double svm_c = 1.0;
  int svm_epochs = 200;

  std::map<std::string, std::string> to_map() const;
  static Hyperparams from_map(const std::map<std::string, std::string>& m);
};

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return cols_ ? data_.size() / cols_ : 0; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  void push_row(std::span<const double> values);

 private:
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Features plus 0/1 targets (1 = troll).
struct TrainingSet {
  Matrix x;
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
};

// Min-max scaler; constant columns map to 0.
struct Scaler {
  std::vector<double> minimum;
  std::vector<double> range;

  static Scaler fit(const Matrix& x);
  std::vector<double> apply(std::span<const double> row) const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when value <= threshold
  int left = -1;
  int right = -1;
  double troll_fraction = 0.0;
  double impurity = 0.0;  // Gini
  std::uint32_t samples = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  // Troll fraction of the leaf reached by `row`.
  double predict(std::span<const double> row) const;
  std::size_t leaf_count() const;
};

struct TreeOptions {
  int max_features = 0;  // 0 or >= cols means every column, in index order
  int max_depth = 0;
  int min_samples_leaf = 1;
};

// CART on the given rows of `data` (duplicates allowed, as in a bootstrap
// sample). Splits minimize weighted Gini; ties go to the lowest feature
// index, then the lowest threshold. `rng` is only used when max_features
// restricts the candidate columns.
DecisionTree grow_tree(const TrainingSet& data, std::span<const std::size_t> rows, const TreeOptions& options,
                       Rng* rng);

// Dense per-column value ranks of a training matrix. Equal values share a
// rank, so sorting ranks orders rows exactly as sorting values would.
struct ColumnRanks {
  std::size_t rows = 0;
  std::vector<std::uint32_t> rank;          // column-major
  std::vector<std::vector<double>> values;  // distinct values per column, ascending

  static ColumnRanks build(const Matrix& x);
  std::uint32_t at(std::size_t row, std::size_t col) const { return rank[col * rows + row]; }
};

// Same tree as above, reusing ranks computed once for `data`.
DecisionTree grow_tree(const TrainingSet& data, const ColumnRanks& ranks, std::span<const std::size_t> rows,
                       const TreeOptions& options, Rng* rng);

// Impurity decrease per column, weighted by node sample counts.
std::vector<double> tree_impurity_decrease(const DecisionTree& tree, std::size_t cols);

struct KnnPayload {
  Scaler scaler;
  Matrix x;  // scaled training rows
  std::vector<int> y;
};

struct SvmPayload {
  Scaler scaler;
  std::vector<double> weights;
  double bias = 0.0;
};

struct ForestPayload {
  std::vector<DecisionTree> trees;
};

using Payload = std::variant<KnnPayload, DecisionTree, SvmPayload, ForestPayload>;

struct TrainedModel {
  Algorithm algorithm = Algorithm::random_forest;
  Hyperparams hyperparams;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;  // columns the model consumes
  std::vector<std::size_t> columns;        // their indices in the 45-wide layout
  Payload payload;
  std::optional<std::vector<double>> importances;  // forest only, over `columns`
  std::vector<std::string> training_ids;
  std::vector<std::string> language_codes;
  std::string catalog_digest;
  std::int64_t reference_time = 0;  // account-age clock of the training data
};

struct Prediction {
  Label label = Label::benign;
  double score = 0.0;  // troll score in [0, 1]; label is troll iff score >= 0.5
};

// Bootstrap sample of n row indices drawn with replacement.
std::vector<std::size_t> bootstrap_rows(std::size_t n, Rng& rng);

// Builds the training set restricted to `columns`. Throws DataError for
// fewer than 2 rows, a single class, or a non-finite value.
TrainingSet make_training_set(const features::Dataset& dataset, std::span<const std::size_t> columns);

TrainedModel train(Algorithm algorithm, const features::Dataset& dataset, const Hyperparams& params,
                   std::uint64_t seed, Exec exec = Exec::parallel);

TrainedModel train(Algorithm algorithm, const features::Dataset& dataset, std::span<const std::size_t> columns,
                   const Hyperparams& params, std::uint64_t seed, Exec exec = Exec::parallel);

// Lower-level fit on a prepared training set (columns already selected).
Payload fit_payload(Algorithm algorithm, const TrainingSet& data, const Hyperparams& params, std::uint64_t seed,
                    Exec exec);

double payload_score(const Payload& payload, const Hyperparams& params, std::span<const double> row);

// fv must have the full 45-wide layout.
Prediction predict(const TrainedModel& model, std::span<const double> fv);
Prediction predict(const TrainedModel& model, const features::FeatureVector& fv);

Prediction prediction_from_score(double score);

// ---- Evaluation ---------------------------------------------------------------

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Confusion confusion;
  bool precision_undefined = false;  // no predicted trolls
  bool recall_undefined = false;     // no actual trolls
};

// Positive class = troll. Throws DataError on length mismatch or empty input.
Metrics compute_metrics(std::span<const Label> predicted, std::span<const Label> truth);

struct EvalReport {
  std::vector<Metrics> folds;
  Metrics aggregate;  // pooled over all held-out predictions
};

// Stratified fold assignment: per class, rows are shuffled and dealt
// round-robin. Throws DataError when a class has fewer rows than folds.
std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t folds, std::uint64_t seed);

EvalReport cross_validate(Algorithm algorithm, const features::Dataset& dataset, std::size_t folds,
                          std::uint64_t seed, const Hyperparams& params = {}, Exec exec = Exec::parallel);

EvalReport cross_validate(Algorithm algorithm, const features::Dataset& dataset,
                          std::span<const std::size_t> columns, std::size_t folds, std::uint64_t seed,
                          const Hyperparams& params = {}, Exec exec = Exec::parallel);

struct FeatureGroup {
  std::string name;
  std::vector<std::size_t> columns;
};

// metadata (1-10), temporal (11-34), stylometry (35-42), source (43-45), all.
const std::vector<FeatureGroup>& component_groups();

std::vector<std::pair<std::string, EvalReport>> ablate_components(Algorithm algorithm,
                                                                  const features::Dataset& dataset,
                                                                  std::size_t folds, std::uint64_t seed,
                                                                  const Hyperparams& params = {},
                                                                  Exec exec = Exec::parallel);

// Per-feature Gini importance over the full 45-wide layout; sums to 1.
// Throws DataError for a non-forest model.
std::vector<double> gini_importance(const TrainedModel& model);

std::string eval_report_csv(const EvalReport& report);
std::string eval_summary(const EvalReport& report);

// ---- Persistence ----------------------------------------------------------------

inline constexpr std::string_view kModelMagic = "TROLLSCOPE-MODEL";
inline constexpr int kModelVersion = 1;

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);

}  // namespace trollscope::learn
