#include "trollscope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "trollscope/error.hpp"
#include "trollscope/util/csv.hpp"
#include "trollscope/util/format.hpp"

namespace trollscope::stats {

double kolmogorov_survival(double lambda) {
  // Below 0.05 the survival function equals 1 to double precision, and the
  // alternating series would need millions of terms.
  if (!(lambda >= 0.05)) return 1.0;
  const double a = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 100000; ++k) {
    const double term = std::exp(a * k * k);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.empty() || b.empty()) throw DataError("KS test needs two non-empty samples");
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(a.begin(), a.end(), finite) || !std::all_of(b.begin(), b.end(), finite)) {
    throw DataError("KS test samples must be finite");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());

  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }

  KsResult r;
  r.statistic = d;
  r.n1 = x.size();
  r.n2 = y.size();
  const double ne = n1 * n2 / (n1 + n2);
  const double root = std::sqrt(ne);
  r.p_value = kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
  r.significant = r.p_value < alpha;
  return r;
}

std::vector<ComparisonRow> comparison_report(std::span<const features::FeatureValues> trolls,
                                             std::span<const features::FeatureValues> real,
                                             std::span<const std::string> feature_subset, double alpha,
                                             Exec exec) {
  if (trolls.empty() || real.empty()) throw DataError("comparison report needs both troll and real rows");
  std::vector<std::size_t> columns;
  for (const auto& name : feature_subset) {
    auto idx = features::feature_index(name);
    if (!idx) throw DataError("unknown feature '" + name + "'");
    columns.push_back(*idx);
  }
  std::vector<ComparisonRow> rows(columns.size());
  parallel_for(columns.size(), exec, [&](std::size_t c) {
    const std::size_t col = columns[c];
    std::vector<double> t, r;
    t.reserve(trolls.size());
    r.reserve(real.size());
    for (const auto& v : trolls) t.push_back(v[col]);
    for (const auto& v : real) r.push_back(v[col]);
    const auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    rows[c] = {feature_subset[c], mean(t), mean(r), ks_two_sample(t, r, alpha)};
  });
  return rows;
}

std::vector<ComparisonRow> comparison_report(const features::Dataset& dataset,
                                             std::span<const std::string> feature_subset, double alpha,
                                             Exec exec) {
  std::vector<features::FeatureValues> trolls, real;
  for (const auto& row : dataset.rows) {
    (row.label == Label::troll ? trolls : real).push_back(row.features.values);
  }
  return comparison_report(trolls, real, feature_subset, alpha, exec);
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  csv::write_row(out, {"feature", "mean_troll", "mean_real", "ks_statistic", "p_value", "n_troll", "n_real",
                       "significant"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.feature_name, fmt::number(r.mean_troll), fmt::number(r.mean_real),
                         fmt::number(r.ks.statistic), fmt::number(r.ks.p_value), std::to_string(r.ks.n1),
                         std::to_string(r.ks.n2), r.ks.significant ? "true" : "false"});
  }
  return out.str();
}

std::string comparison_table(const std::vector<ComparisonRow>& rows) {
  std::vector<std::vector<std::string>> table = {{"Feature", "Troll", "Real", "KS", "P-value"}};
  for (const auto& r : rows) {
    table.push_back({r.feature_name, fmt::fixed(r.mean_troll, 3), fmt::fixed(r.mean_real, 3),
                     fmt::fixed(r.ks.statistic, 3),
                     r.ks.p_value < 0.01 ? "<0.01" : fmt::fixed(r.ks.p_value, 3)});
  }
  return fmt::aligned_table(table);
}

std::vector<std::pair<std::size_t, double>> source_count_cdf(std::span<const Account> accounts) {
  if (accounts.empty()) throw DataError("source count CDF needs at least one account");
  std::map<std::size_t, std::size_t> counts;
  for (const auto& a : accounts) {
    std::set<std::string_view> distinct;
    for (const auto& t : a.tweets) distinct.insert(t.client_name);
    ++counts[distinct.size()];
  }
  std::vector<std::pair<std::size_t, double>> cdf;
  std::size_t cumulative = 0;
  const double n = static_cast<double>(accounts.size());
  for (const auto& [value, c] : counts) {
    cumulative += c;
    cdf.emplace_back(value, static_cast<double>(cumulative) / n);
  }
  return cdf;
}

}  // namespace trollscope::stats
