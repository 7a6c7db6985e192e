#include "erp/relieff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "erp/errors.hpp"

namespace erp {

LabeledDataset LabeledDataset::from_matrix(
    std::vector<std::vector<double>> matrix, std::vector<int> labels) {
  LabeledDataset ds;
  ds.matrix = std::move(matrix);
  ds.labels = std::move(labels);
  const std::size_t features = ds.n_features();
  ds.feature_ranges.resize(features);
  for (std::size_t f = 0; f < features; ++f) {
    FeatureRange r{ds.matrix[0][f], ds.matrix[0][f]};
    for (const auto& row : ds.matrix) {
      r.min = std::min(r.min, row[f]);
      r.max = std::max(r.max, row[f]);
    }
    ds.feature_ranges[f] = r;
  }
  ds.validate();
  return ds;
}

void LabeledDataset::validate() const {
  if (matrix.empty()) throw_error(ErrorKind::empty_input, "dataset is empty");
  if (labels.size() != matrix.size()) {
    throw_error(ErrorKind::shape, "label count does not match row count");
  }
  const std::size_t features = matrix[0].size();
  if (features == 0) throw_error(ErrorKind::empty_input, "no features");
  bool saw[2] = {false, false};
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (matrix[i].size() != features) {
      throw_error(ErrorKind::shape, "ragged feature matrix");
    }
    if (labels[i] != 0 && labels[i] != 1) {
      throw_error(ErrorKind::invalid_argument, "labels must be 0 or 1");
    }
    saw[labels[i]] = true;
    for (double v : matrix[i]) {
      if (std::isnan(v)) {
        throw_error(ErrorKind::invalid_argument,
                    "dataset contains missing values; impute first");
      }
    }
  }
  if (!saw[0] || !saw[1]) {
    throw_error(ErrorKind::invalid_argument,
                "both classes must be present");
  }
  if (feature_ranges.size() != features) {
    throw_error(ErrorKind::shape, "feature range count mismatch");
  }
  for (std::size_t f = 0; f < features; ++f) {
    double lo = matrix[0][f];
    double hi = matrix[0][f];
    for (const auto& row : matrix) {
      lo = std::min(lo, row[f]);
      hi = std::max(hi, row[f]);
    }
    if (feature_ranges[f].min != lo || feature_ranges[f].max != hi) {
      throw_error(ErrorKind::invalid_argument,
                  "feature ranges inconsistent with matrix");
    }
  }
}

WeightVector relieff_weights(const LabeledDataset& ds, std::size_t k) {
  if (k == 0) {
    throw_error(ErrorKind::invalid_argument,
                "neighbor count must be positive");
  }
  ds.validate();
  const std::size_t n = ds.n_samples();
  const std::size_t features = ds.n_features();

  std::size_t class_count[2] = {0, 0};
  for (int label : ds.labels) class_count[label]++;
  if (class_count[0] <= k || class_count[1] <= k) {
    throw_error(ErrorKind::invalid_argument,
                "each class needs at least k+1 members");
  }

  // Normalize to [0,1] by dataset range; constant features map to 0 so
  // they influence neither distances nor weights.
  std::vector<std::vector<double>> z(n, std::vector<double>(features));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < features; ++f) {
      const double span = ds.feature_ranges[f].max - ds.feature_ranges[f].min;
      z[i][f] = span > 0.0
                    ? (ds.matrix[i][f] - ds.feature_ranges[f].min) / span
                    : 0.0;
    }
  }

  std::vector<double> weights(features, 0.0);
  std::vector<std::pair<double, std::size_t>> hits;
  std::vector<std::pair<double, std::size_t>> misses;
  std::vector<double> hit_mean(features);
  std::vector<double> miss_mean(features);
  for (std::size_t t = 0; t < n; ++t) {
    hits.clear();
    misses.clear();
    for (std::size_t o = 0; o < n; ++o) {
      if (o == t) continue;
      double dist = 0.0;
      for (std::size_t f = 0; f < features; ++f) {
        dist += std::abs(z[t][f] - z[o][f]);
      }
      (ds.labels[o] == ds.labels[t] ? hits : misses).emplace_back(dist, o);
    }
    // Sorting by (distance, index) makes equal-distance neighbor choice
    // deterministic and independent of row order.
    std::sort(hits.begin(), hits.end());
    std::sort(misses.begin(), misses.end());

    std::fill(hit_mean.begin(), hit_mean.end(), 0.0);
    std::fill(miss_mean.begin(), miss_mean.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t h = hits[j].second;
      const std::size_t m = misses[j].second;
      for (std::size_t f = 0; f < features; ++f) {
        hit_mean[f] += std::abs(z[t][f] - z[h][f]);
        miss_mean[f] += std::abs(z[t][f] - z[m][f]);
      }
    }
    for (std::size_t f = 0; f < features; ++f) {
      weights[f] += (miss_mean[f] - hit_mean[f]) / static_cast<double>(k);
    }
  }

  WeightVector out;
  out.k_neighbors = k;
  out.weights.resize(features);
  for (std::size_t f = 0; f < features; ++f) {
    const double span = ds.feature_ranges[f].max - ds.feature_ranges[f].min;
    out.weights[f] = span > 0.0 ? weights[f] / static_cast<double>(n) : 0.0;
  }
  return out;
}

std::vector<std::size_t> select_top_k(const WeightVector& w, std::size_t k) {
  if (k == 0) {
    throw_error(ErrorKind::invalid_argument,
                "selection count must be positive");
  }
  if (k > w.weights.size()) {
    throw_error(ErrorKind::invalid_argument,
                "cannot select more features than exist");
  }
  std::vector<std::size_t> order(w.weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&w](std::size_t a, std::size_t b) {
                     return w.weights[a] > w.weights[b];
                   });
  order.resize(k);
  return order;
}

}  // namespace erp
