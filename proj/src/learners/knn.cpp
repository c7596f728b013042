#include <algorithm>
#include <numeric>

#include "detail.hpp"

namespace trollscope::learn::detail {

KnnPayload fit_knn(const TrainingSet& data) {
  KnnPayload p;
  p.scaler = Scaler::fit(data.x);
  p.x = Matrix(0, data.x.cols());
  for (std::size_t r = 0; r < data.size(); ++r) p.x.push_row(p.scaler.apply(data.x.row(r)));
  p.y = data.y;
  return p;
}

// Fraction of troll labels among the k nearest scaled training rows;
// equal distances are resolved by training-row order.
double knn_score(const KnnPayload& p, int k, std::span<const double> row) {
  const auto q = p.scaler.apply(row);
  const std::size_t n = p.y.size();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = p.x.row(i);
    double d = 0;
    for (std::size_t c = 0; c < q.size(); ++c) {
      const double diff = x[c] - q[c];
      d += diff * diff;
    }
    dist[i] = {d, i};
  }
  const auto k_eff = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 1)), n);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_eff), dist.end());
  std::size_t trolls = 0;
  for (std::size_t i = 0; i < k_eff; ++i) trolls += static_cast<std::size_t>(p.y[dist[i].second]);
  return static_cast<double>(trolls) / static_cast<double>(k_eff);
}

}  // namespace trollscope::learn::detail
