#include <cmath>
#include <numeric>

#include "detail.hpp"

namespace trollscope::learn::detail {

// Pegasos: stochastic sub-gradient descent on the L2-regularized hinge loss
// with lambda = 1 / (C n), step 1 / (lambda t), and projection onto the
// ball of radius 1 / sqrt(lambda). The bias is an extra constant-1 input.
SvmPayload fit_svm(const TrainingSet& data, const Hyperparams& params, std::uint64_t seed) {
  SvmPayload p;
  p.scaler = Scaler::fit(data.x);
  const std::size_t n = data.size();
  const std::size_t d = data.x.cols();
  Matrix x(0, d + 1);
  std::vector<double> row(d + 1, 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto scaled = p.scaler.apply(data.x.row(r));
    std::copy(scaled.begin(), scaled.end(), row.begin());
    x.push_row(row);
  }

  const double lambda = 1.0 / (params.svm_c * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);
  std::vector<double> w(d + 1, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, 0x5F3));
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < params.svm_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double y = data.y[i] ? 1.0 : -1.0;
      const auto xi = x.row(i);
      double margin = 0;
      for (std::size_t c = 0; c <= d; ++c) margin += w[c] * xi[c];
      margin *= y;
      const double shrink = 1.0 - eta * lambda;
      for (double& wc : w) wc *= shrink;
      if (margin < 1.0) {
        for (std::size_t c = 0; c <= d; ++c) w[c] += eta * y * xi[c];
      }
      double norm = 0;
      for (double wc : w) norm += wc * wc;
      norm = std::sqrt(norm);
      if (norm > radius) {
        for (double& wc : w) wc *= radius / norm;
      }
    }
  }
  p.bias = w[d];
  w.resize(d);
  p.weights = std::move(w);
  return p;
}

double svm_score(const SvmPayload& p, std::span<const double> row) {
  const auto q = p.scaler.apply(row);
  double margin = p.bias;
  for (std::size_t c = 0; c < q.size(); ++c) margin += p.weights[c] * q[c];
  return 1.0 / (1.0 + std::exp(-margin));
}

}  // namespace trollscope::learn::detail
