#include <algorithm>
#include <numeric>

#include "trollscope/learners.hpp"

namespace trollscope::learn {
namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // n * weighted child Gini; lower is better
};

double gini(double trolls, double n) {
  if (n <= 0) return 0.0;
  const double p = trolls / n;
  return 2.0 * p * (1.0 - p);
}

double child_score(double ones, double n) {
  // n * Gini(child) for two classes
  const double zeros = n - ones;
  return n - (ones * ones + zeros * zeros) / n;
}

class TreeBuilder {
 public:
  TreeBuilder(const TrainingSet& data, const ColumnRanks& ranks, std::span<const std::size_t> rows,
              const TreeOptions& options, Rng* rng)
      : data_(data), ranks_(ranks), idx_(rows.begin(), rows.end()), options_(options), rng_(rng) {
    const auto cols = data.x.cols();
    features_.resize(cols);
    std::iota(features_.begin(), features_.end(), 0);
    const auto mtry = static_cast<std::size_t>(std::max(options.max_features, 0));
    subset_ = (mtry == 0 || mtry >= cols) ? cols : mtry;
    buffer_.reserve(idx_.size());
    std::size_t distinct = 0;
    for (const auto& v : ranks.values) distinct = std::max(distinct, v.size());
    count_.assign(distinct, 0);
    ones_.assign(distinct, 0);
  }

  DecisionTree build() {
    struct Work {
      int node;
      std::size_t begin, end;
      int depth;
    };
    DecisionTree tree;
    tree.nodes.emplace_back();
    std::vector<Work> stack = {{0, 0, idx_.size(), 0}};
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      const std::size_t n = w.end - w.begin;
      std::size_t trolls = 0;
      for (std::size_t i = w.begin; i < w.end; ++i) trolls += static_cast<std::size_t>(data_.y[idx_[i]]);
      {
        auto& node = tree.nodes[static_cast<std::size_t>(w.node)];
        node.samples = static_cast<std::uint32_t>(n);
        node.troll_fraction = n ? static_cast<double>(trolls) / static_cast<double>(n) : 0.0;
        node.impurity = gini(static_cast<double>(trolls), static_cast<double>(n));
      }
      const auto leaf_size = static_cast<std::size_t>(std::max(options_.min_samples_leaf, 1));
      if (trolls == 0 || trolls == n || n < 2 * leaf_size ||
          (options_.max_depth > 0 && w.depth >= options_.max_depth)) {
        continue;
      }
      const Split split = find_split(w.begin, w.end, leaf_size);
      if (split.feature < 0) continue;

      const auto col = static_cast<std::size_t>(split.feature);
      const auto mid = std::partition(idx_.begin() + static_cast<std::ptrdiff_t>(w.begin),
                                      idx_.begin() + static_cast<std::ptrdiff_t>(w.end),
                                      [&](std::size_t r) { return data_.x.at(r, col) <= split.threshold; });
      const auto split_at = static_cast<std::size_t>(mid - idx_.begin());
      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& node = tree.nodes[static_cast<std::size_t>(w.node)];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, split_at, w.end, w.depth + 1});
      stack.push_back({left, w.begin, split_at, w.depth + 1});
    }
    return tree;
  }

 private:
  // Best split for one column, or feature = -1 when the column is constant
  // over the node (or no split respects min_samples_leaf).
  Split best_for_column(std::size_t col, std::size_t begin, std::size_t end, std::size_t leaf_size) {
    // key = rank * 2 + label; ordering keys orders rows by value.
    buffer_.clear();
    std::uint32_t total_ones = 0;
    const std::uint32_t first = ranks_.at(idx_[begin], col);
    bool constant = true;
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = idx_[i];
      const std::uint32_t rank = ranks_.at(r, col);
      const auto label = static_cast<std::uint32_t>(data_.y[r]);
      constant = constant && rank == first;
      buffer_.push_back(rank << 1 | label);
      total_ones += label;
    }
    if (constant) return {};
    const std::size_t n = buffer_.size();
    const auto& values = ranks_.values[col];

    Split best;
    const auto offer = [&](std::size_t n_left, std::uint32_t left_ones, std::uint32_t lo_rank, std::uint32_t hi_rank) {
      if (n_left < leaf_size || n - n_left < leaf_size) return;
      const double nl = static_cast<double>(n_left);
      const double nr = static_cast<double>(n - n_left);
      const double score = child_score(left_ones, nl) + child_score(total_ones - left_ones, nr);
      if (best.feature < 0 || score < best.score) {
        const double lo = values[lo_rank];
        const double hi = values[hi_rank];
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        best = {static_cast<int>(col), threshold, score};
      }
    };

    if (values.size() <= 2 * n) {
      // Counting pass over ranks; visits the same boundaries as the sort below.
      for (auto key : buffer_) {
        ++count_[key >> 1];
        ones_[key >> 1] += key & 1u;
      }
      std::size_t n_left = 0;
      std::uint32_t left_ones = 0;
      std::uint32_t prev = 0;
      bool have_prev = false;
      for (std::uint32_t rank = 0; rank < values.size(); ++rank) {
        if (count_[rank] == 0) continue;
        if (have_prev) offer(n_left, left_ones, prev, rank);
        n_left += count_[rank];
        left_ones += ones_[rank];
        count_[rank] = 0;
        ones_[rank] = 0;
        prev = rank;
        have_prev = true;
      }
      return best;
    }

    std::sort(buffer_.begin(), buffer_.end());
    std::uint32_t left_ones = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_ones += buffer_[i] & 1u;
      const std::uint32_t lo_rank = buffer_[i] >> 1;
      const std::uint32_t hi_rank = buffer_[i + 1] >> 1;
      if (lo_rank != hi_rank) offer(i + 1, left_ones, lo_rank, hi_rank);
    }
    return best;
  }

  Split find_split(std::size_t begin, std::size_t end, std::size_t leaf_size) {
    const std::size_t cols = features_.size();
    Split best;
    const auto consider = [&](std::size_t col) {
      const Split s = best_for_column(col, begin, end, leaf_size);
      if (s.feature >= 0 && (best.feature < 0 || s.score < best.score ||
                             (s.score == best.score && s.feature < best.feature))) {
        best = s;
      }
    };
    if (subset_ == cols || rng_ == nullptr) {
      for (std::size_t c = 0; c < cols; ++c) consider(c);
      return best;
    }
    // Partial Fisher-Yates: the first subset_ slots become a uniform random
    // subset, evaluated in index order. If every one of them is constant over
    // the node, keep drawing single columns until a usable one turns up.
    for (std::size_t i = 0; i < subset_; ++i) {
      const auto j = i + static_cast<std::size_t>(rng_->below(cols - i));
      std::swap(features_[i], features_[j]);
    }
    std::vector<std::size_t> chosen(features_.begin(), features_.begin() + static_cast<std::ptrdiff_t>(subset_));
    std::sort(chosen.begin(), chosen.end());
    for (auto c : chosen) consider(c);
    for (std::size_t i = subset_; best.feature < 0 && i < cols; ++i) {
      const auto j = i + static_cast<std::size_t>(rng_->below(cols - i));
      std::swap(features_[i], features_[j]);
      consider(features_[i]);
    }
    return best;
  }

  const TrainingSet& data_;
  const ColumnRanks& ranks_;
  std::vector<std::size_t> idx_;
  TreeOptions options_;
  Rng* rng_;
  std::vector<std::size_t> features_;
  std::size_t subset_ = 0;
  std::vector<std::uint32_t> buffer_;
  std::vector<std::uint32_t> count_, ones_;  // per-rank scratch, kept zeroed
};

}  // namespace

double DecisionTree::predict(std::span<const double> row) const {
  std::size_t i = 0;
  for (;;) {
    const auto& node = nodes[i];
    if (node.feature < 0) return node.troll_fraction;
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                : node.right);
  }
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

ColumnRanks ColumnRanks::build(const Matrix& x) {
  ColumnRanks out;
  out.rows = x.rows();
  out.rank.resize(x.rows() * x.cols());
  out.values.resize(x.cols());
  std::vector<std::size_t> order(x.rows());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x.at(a, c) < x.at(b, c); });
    auto& values = out.values[c];
    for (auto r : order) {
      const double v = x.at(r, c);
      if (values.empty() || values.back() < v) values.push_back(v);
      out.rank[c * out.rows + r] = static_cast<std::uint32_t>(values.size() - 1);
    }
  }
  return out;
}

DecisionTree grow_tree(const TrainingSet& data, const ColumnRanks& ranks, std::span<const std::size_t> rows,
                       const TreeOptions& options, Rng* rng) {
  return TreeBuilder(data, ranks, rows, options, rng).build();
}

DecisionTree grow_tree(const TrainingSet& data, std::span<const std::size_t> rows, const TreeOptions& options,
                       Rng* rng) {
  return grow_tree(data, ColumnRanks::build(data.x), rows, options, rng);
}

std::vector<double> tree_impurity_decrease(const DecisionTree& tree, std::size_t cols) {
  std::vector<double> out(cols, 0.0);
  for (const auto& node : tree.nodes) {
    if (node.feature < 0) continue;
    const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
    const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
    const double decrease = node.samples * node.impurity - l.samples * l.impurity - r.samples * r.impurity;
    out[static_cast<std::size_t>(node.feature)] += std::max(decrease, 0.0);
  }
  return out;
}

}  // namespace trollscope::learn
