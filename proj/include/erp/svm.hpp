#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "erp/relieff.hpp"

namespace erp {

enum class KernelKind { linear, gaussian };

const char* to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& s);

// gamma <= 0 requests the default 1/(selected feature count), resolved
// when a model is trained.
struct KernelSpec {
  KernelKind kind = KernelKind::linear;
  double gamma = 0.0;
};

// Soft-margin maximum-margin classifier in dual form. Rows in
// support_samples are already standardized and restricted to
// feature_subset; support_coefficients holds alpha_i * y_i.
struct TrainedModel {
  std::vector<double> support_coefficients;
  std::vector<std::vector<double>> support_samples;
  double bias = 0.0;
  KernelSpec kernel;
  double regularization_c = 1.0;
  std::vector<std::size_t> feature_subset;
  std::vector<double> feature_means;   // per subset column
  std::vector<double> feature_scales;  // per subset column, never 0
};

struct Prediction {
  int label = 0;        // 0 = regular, 1 = dyslexic
  double margin = 0.0;  // signed decision value
};

// Solves the dual with pairwise coordinate updates (maximal violating
// pair) to KKT gap 1e-3. Deterministic: pair choice ties break by lowest
// index, so the result does not depend on the seed.
TrainedModel train(const LabeledDataset& ds,
                   const std::vector<std::size_t>& subset,
                   const KernelSpec& kernel, double c, std::uint64_t seed);

// `sample` holds exactly the model's subset columns, untransformed;
// the model applies its stored standardization.
Prediction predict(const TrainedModel& model,
                   const std::vector<double>& sample);

enum class CvScheme { stratified_k_fold, leave_one_out };

const char* to_string(CvScheme scheme);
CvScheme cv_scheme_from_string(const std::string& s);

// In-fold feature selection settings.
struct SelectionSpec {
  std::size_t relieff_k = 10;   // neighbors per class
  std::size_t n_features = 10;  // retained feature count
};

struct CvOptions {
  CvScheme scheme = CvScheme::stratified_k_fold;
  std::size_t folds = 5;
  std::size_t repeats = 20;
  std::uint64_t seed = 0;
  KernelSpec kernel;
  double c = 1.0;
  SelectionSpec selection;
  // Nonempty short-circuits in-fold selection with a subset chosen ahead
  // of time (typically on the full dataset). That leaks test information
  // into selection and inflates accuracy; it exists to reproduce the
  // optimistic protocol and must be requested explicitly.
  std::vector<std::size_t> fixed_subset;
};

using ConfusionCounts = std::array<std::array<std::size_t, 2>, 2>;

// Percentages are row-normalized: cell[true][pred] as a share of the
// true class. mean/sd taken over repeats (population sd).
struct ConfusionReport {
  std::array<std::array<double, 2>, 2> mean_pct{};
  std::array<std::array<double, 2>, 2> sd_pct{};
  std::size_t n_repeats = 0;
  std::string scheme;
  std::vector<ConfusionCounts> per_repeat;

  double mean_diagonal() const {
    return (mean_pct[0][0] + mean_pct[1][1]) / 2.0;
  }
};

// Repeated cross-validation over `matrix` rows. NaN cells are allowed:
// imputation runs inside each training fold, as do feature selection and
// standardization, so no test information reaches training.
ConfusionReport cross_validate(const std::vector<std::vector<double>>& matrix,
                               const std::vector<int>& labels,
                               const CvOptions& options);

// Fixed-width text table in the two-row true-class by predicted-class
// layout with mean%±sd% cells.
std::string render_confusion_table(const ConfusionReport& report);

// Column means of `rows` restricted to `row_indices`, ignoring NaN; a
// column with no finite values gets mean 0.
std::vector<double> column_means(
    const std::vector<std::vector<double>>& rows,
    const std::vector<std::size_t>& row_indices);

}  // namespace erp
