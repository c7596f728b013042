#pragma once

#include "trollscope/learners.hpp"

namespace trollscope::learn::detail {

int forest_max_features(const Hyperparams& params, std::size_t cols);
ForestPayload fit_forest(const TrainingSet& data, const Hyperparams& params, std::uint64_t seed, Exec exec);
double forest_score(const ForestPayload& forest, std::span<const double> row);
std::vector<double> forest_importances(const ForestPayload& forest, std::size_t cols);

KnnPayload fit_knn(const TrainingSet& data);
double knn_score(const KnnPayload& p, int k, std::span<const double> row);

SvmPayload fit_svm(const TrainingSet& data, const Hyperparams& params, std::uint64_t seed);
double svm_score(const SvmPayload& p, std::span<const double> row);

}  // namespace trollscope::learn::detail
