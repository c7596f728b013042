#include <cmath>
#include <numeric>
#include <stdexcept>

#include "detail.hpp"
#include "trollscope/error.hpp"
#include "trollscope/util/format.hpp"

namespace trollscope::learn {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::knn: return "knn";
    case Algorithm::decision_tree: return "decision_tree";
    case Algorithm::linear_svm: return "linear_svm";
    case Algorithm::random_forest: return "random_forest";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "knn") return Algorithm::knn;
  if (text == "dt" || text == "decision_tree") return Algorithm::decision_tree;
  if (text == "svm" || text == "linear_svm") return Algorithm::linear_svm;
  if (text == "rf" || text == "random_forest") return Algorithm::random_forest;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "' (expected rf, dt, knn or svm)");
}

std::map<std::string, std::string> Hyperparams::to_map() const {
  return {
      {"k", std::to_string(k)},
      {"n_trees", std::to_string(n_trees)},
      {"max_features", std::to_string(max_features)},
      {"max_depth", std::to_string(max_depth)},
      {"min_samples_leaf", std::to_string(min_samples_leaf)},
      {"svm_c", fmt::number(svm_c)},
      {"svm_epochs", std::to_string(svm_epochs)},
  };
}

Hyperparams Hyperparams::from_map(const std::map<std::string, std::string>& m) {
  Hyperparams h;
  for (const auto& [key, value] : m) {
    try {
      if (key == "k") h.k = std::stoi(value);
      else if (key == "n_trees") h.n_trees = std::stoi(value);
      else if (key == "max_features") h.max_features = std::stoi(value);
      else if (key == "max_depth") h.max_depth = std::stoi(value);
      else if (key == "min_samples_leaf") h.min_samples_leaf = std::stoi(value);
      else if (key == "svm_c") h.svm_c = std::stod(value);
      else if (key == "svm_epochs") h.svm_epochs = std::stoi(value);
      else throw DataError("unknown hyperparameter '" + key + "'");
    } catch (const std::logic_error&) {
      throw DataError("bad value '" + value + "' for hyperparameter '" + key + "'");
    }
  }
  if (h.k < 1 || h.n_trees < 1 || h.max_features < 0 || h.max_depth < 0 || h.min_samples_leaf < 1 ||
      !(h.svm_c > 0) || h.svm_epochs < 1) {
    throw DataError("hyperparameter out of range");
  }
  return h;
}

void Matrix::push_row(std::span<const double> values) {
  if (values.size() != cols_) throw std::invalid_argument("row width does not match matrix");
  data_.insert(data_.end(), values.begin(), values.end());
}

Scaler Scaler::fit(const Matrix& x) {
  Scaler s;
  const auto cols = x.cols();
  s.minimum.assign(cols, 0.0);
  s.range.assign(cols, 0.0);
  if (x.rows() == 0) return s;
  std::vector<double> hi(cols);
  for (std::size_t c = 0; c < cols; ++c) s.minimum[c] = hi[c] = x.at(0, c);
  for (std::size_t r = 1; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      s.minimum[c] = std::min(s.minimum[c], x.at(r, c));
      hi[c] = std::max(hi[c], x.at(r, c));
    }
  }
  for (std::size_t c = 0; c < cols; ++c) s.range[c] = hi[c] - s.minimum[c];
  return s;
}

std::vector<double> Scaler::apply(std::span<const double> row) const {
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) {
    out[c] = range[c] > 0 ? (row[c] - minimum[c]) / range[c] : 0.0;
  }
  return out;
}

TrainingSet make_training_set(const features::Dataset& dataset, std::span<const std::size_t> columns) {
  if (dataset.rows.size() < 2) throw DataError("training needs at least 2 rows");
  TrainingSet t;
  t.x = Matrix(0, columns.size());
  std::vector<double> row(columns.size());
  for (const auto& r : dataset.rows) {
    if (r.label == Label::unlabeled) throw DataError("training rows must be labeled");
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] >= features::kFeatureCount) throw DataError("feature column out of range");
      row[c] = r.features.values[columns[c]];
      if (!std::isfinite(row[c])) {
        throw DataError("non-finite value for " + std::string(features::feature_names()[columns[c]]) +
                        " in account " + r.features.account_id);
      }
    }
    t.x.push_row(row);
    t.y.push_back(r.label == Label::troll ? 1 : 0);
  }
  const auto trolls = std::accumulate(t.y.begin(), t.y.end(), std::size_t{0});
  if (trolls == 0 || trolls == t.y.size()) throw DataError("training data contains a single class");
  return t;
}

Payload fit_payload(Algorithm algorithm, const TrainingSet& data, const Hyperparams& params, std::uint64_t seed,
                    Exec exec) {
  switch (algorithm) {
    case Algorithm::knn: return detail::fit_knn(data);
    case Algorithm::decision_tree: {
      std::vector<std::size_t> rows(data.size());
      std::iota(rows.begin(), rows.end(), 0);
      const TreeOptions options{0, params.max_depth, params.min_samples_leaf};
      return grow_tree(data, rows, options, nullptr);
    }
    case Algorithm::linear_svm: return detail::fit_svm(data, params, seed);
    case Algorithm::random_forest: return detail::fit_forest(data, params, seed, exec);
  }
  throw std::logic_error("unhandled algorithm");
}

double payload_score(const Payload& payload, const Hyperparams& params, std::span<const double> row) {
  struct Visitor {
    const Hyperparams& params;
    std::span<const double> row;
    double operator()(const KnnPayload& p) const { return detail::knn_score(p, params.k, row); }
    double operator()(const DecisionTree& t) const { return t.predict(row); }
    double operator()(const SvmPayload& p) const { return detail::svm_score(p, row); }
    double operator()(const ForestPayload& f) const { return detail::forest_score(f, row); }
  };
  return std::visit(Visitor{params, row}, payload);
}

namespace {

std::vector<std::size_t> all_columns() {
  std::vector<std::size_t> cols(features::kFeatureCount);
  std::iota(cols.begin(), cols.end(), 0);
  return cols;
}

void check_layout(const features::Dataset& dataset) {
  const auto names = features::feature_names();
  if (dataset.feature_names.size() != names.size() ||
      !std::equal(names.begin(), names.end(), dataset.feature_names.begin())) {
    throw DataError("dataset feature names do not match the expected layout");
  }
}

}  // namespace

TrainedModel train(Algorithm algorithm, const features::Dataset& dataset, const Hyperparams& params,
                   std::uint64_t seed, Exec exec) {
  const auto cols = all_columns();
  return train(algorithm, dataset, cols, params, seed, exec);
}

TrainedModel train(Algorithm algorithm, const features::Dataset& dataset, std::span<const std::size_t> columns,
                   const Hyperparams& params, std::uint64_t seed, Exec exec) {
  check_layout(dataset);
  const auto data = make_training_set(dataset, columns);
  TrainedModel m;
  m.algorithm = algorithm;
  m.hyperparams = params;
  m.seed = seed;
  m.columns.assign(columns.begin(), columns.end());
  for (auto c : columns) m.feature_names.emplace_back(features::feature_names()[c]);
  m.payload = fit_payload(algorithm, data, params, seed, exec);
  if (algorithm == Algorithm::random_forest) {
    m.importances = detail::forest_importances(std::get<ForestPayload>(m.payload), columns.size());
  }
  for (const auto& r : dataset.rows) m.training_ids.push_back(r.features.account_id);
  std::sort(m.training_ids.begin(), m.training_ids.end());
  m.language_codes = dataset.language_codes;
  m.catalog_digest = dataset.catalog_digest;
  m.reference_time = dataset.reference_time;
  return m;
}

Prediction prediction_from_score(double score) {
  return {score >= 0.5 ? Label::troll : Label::benign, score};
}

Prediction predict(const TrainedModel& model, std::span<const double> fv) {
  if (fv.size() != features::kFeatureCount) {
    throw DataError("feature vector has " + std::to_string(fv.size()) + " values, expected " +
                    std::to_string(features::kFeatureCount));
  }
  std::vector<double> row(model.columns.size());
  for (std::size_t c = 0; c < row.size(); ++c) row[c] = fv[model.columns[c]];
  return prediction_from_score(payload_score(model.payload, model.hyperparams, row));
}

Prediction predict(const TrainedModel& model, const features::FeatureVector& fv) {
  return predict(model, std::span<const double>(fv.values));
}

std::vector<double> gini_importance(const TrainedModel& model) {
  if (model.algorithm != Algorithm::random_forest || !model.importances) {
    throw DataError("Gini importance needs a random forest model");
  }
  std::vector<double> out(features::kFeatureCount, 0.0);
  for (std::size_t c = 0; c < model.columns.size(); ++c) out[model.columns[c]] = (*model.importances)[c];
  return out;
}

}  // namespace trollscope::learn
