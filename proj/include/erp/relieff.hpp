#pragma once

#include <cstddef>
#include <vector>

namespace erp {

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;
};

// Fully imputed subjects-by-features matrix with binary labels
// (0 = regular, 1 = dyslexic) and per-feature value ranges.
struct LabeledDataset {
  std::vector<std::vector<double>> matrix;
  std::vector<int> labels;
  std::vector<FeatureRange> feature_ranges;

  std::size_t n_samples() const { return matrix.size(); }
  std::size_t n_features() const {
    return matrix.empty() ? 0 : matrix[0].size();
  }

  // Computes feature_ranges from the matrix.
  static LabeledDataset from_matrix(std::vector<std::vector<double>> matrix,
                                    std::vector<int> labels);

  // Rectangular matrix, both classes present, no NaN (impute first),
  // ranges consistent with the matrix.
  void validate() const;
};

struct WeightVector {
  std::vector<double> weights;
  std::size_t k_neighbors = 0;
};

// Neighborhood-contrast feature weights: every sample serves as a target;
// per target the k nearest same-class rows (hits, excluding the target)
// and k nearest other-class rows (misses) are found under Manhattan
// distance on features normalized to [0,1] by dataset range. A feature's
// weight is the mean over targets of (mean miss difference - mean hit
// difference) in normalized units. Constant features get weight exactly 0.
// Neighbor ties break by ascending sample index.
WeightVector relieff_weights(const LabeledDataset& ds, std::size_t k);

// Indices of the k largest weights, descending; ties by ascending index.
std::vector<std::size_t> select_top_k(const WeightVector& w, std::size_t k);

}  // namespace erp
