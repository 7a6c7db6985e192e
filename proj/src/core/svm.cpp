#include "erp/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "erp/errors.hpp"
#include "erp/rng.hpp"

namespace erp {

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::linear: return "linear";
    case KernelKind::gaussian: return "gaussian";
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string& s) {
  if (s == "linear") return KernelKind::linear;
  if (s == "gaussian" || s == "rbf") return KernelKind::gaussian;
  throw_error(ErrorKind::config, "unknown kernel kind: " + s);
}

const char* to_string(CvScheme scheme) {
  switch (scheme) {
    case CvScheme::stratified_k_fold: return "stratified-k-fold";
    case CvScheme::leave_one_out: return "leave-one-subject-out";
  }
  return "?";
}

CvScheme cv_scheme_from_string(const std::string& s) {
  if (s == "stratified-k-fold" || s == "stratified") {
    return CvScheme::stratified_k_fold;
  }
  if (s == "leave-one-subject-out" || s == "loso") {
    return CvScheme::leave_one_out;
  }
  throw_error(ErrorKind::config, "unknown cross-validation scheme: " + s);
}

namespace {

double kernel_eval(const KernelSpec& kernel, const std::vector<double>& a,
                   const std::vector<double>& b) {
  if (kernel.kind == KernelKind::linear) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    dist2 += d * d;
  }
  return std::exp(-kernel.gamma * dist2);
}

}  // namespace

TrainedModel train(const LabeledDataset& ds,
                   const std::vector<std::size_t>& subset,
                   const KernelSpec& kernel, double c,
                   std::uint64_t /*seed: solver is deterministic*/) {
  ds.validate();
  if (subset.empty()) {
    throw_error(ErrorKind::empty_input, "feature subset is empty");
  }
  for (std::size_t f : subset) {
    if (f >= ds.n_features()) {
      throw_error(ErrorKind::invalid_argument, "subset index out of range");
    }
  }
  if (!(c > 0.0)) {
    throw_error(ErrorKind::invalid_argument,
                "regularization constant must be positive");
  }

  const std::size_t n = ds.n_samples();
  const std::size_t d = subset.size();

  TrainedModel model;
  model.feature_subset = subset;
  model.regularization_c = c;
  model.kernel = kernel;
  if (model.kernel.kind == KernelKind::gaussian && model.kernel.gamma <= 0.0) {
    model.kernel.gamma = 1.0 / static_cast<double>(d);
  }

  model.feature_means.assign(d, 0.0);
  model.feature_scales.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += ds.matrix[i][subset[j]];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = ds.matrix[i][subset[j]] - mean;
      var += dev * dev;
    }
    var /= static_cast<double>(n);
    model.feature_means[j] = mean;
    model.feature_scales[j] = var > 0.0 ? std::sqrt(var) : 1.0;
  }

  std::vector<std::vector<double>> x(n, std::vector<double>(d));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      x[i][j] = (ds.matrix[i][subset[j]] - model.feature_means[j]) /
                model.feature_scales[j];
    }
    y[i] = ds.labels[i] == 1 ? 1.0 : -1.0;
  }

  std::vector<std::vector<double>> k(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      k[i][j] = k[j][i] = kernel_eval(model.kernel, x[i], x[j]);
    }
  }

  // Dual: min (1/2) a'Qa - e'a, 0 <= a <= C, y'a = 0, with
  // Q_ij = y_i y_j K_ij. g holds the gradient Qa - e.
  std::vector<double> alpha(n, 0.0);
  std::vector<double> g(n, -1.0);
  const double stop_gap = 1e-3;
  const std::size_t max_iter = 20000 + 2000 * n;
  double gap = std::numeric_limits<double>::infinity();
  bool converged = false;

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    // Maximal violating pair: i maximizes -y*g over rows that can grow,
    // j minimizes it over rows that can shrink. Strict comparisons keep
    // the lowest admissible index on ties.
    std::ptrdiff_t i = -1;
    std::ptrdiff_t j = -1;
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double f = -y[t] * g[t];
      const bool can_grow = (y[t] > 0.0 && alpha[t] < c) ||
                            (y[t] < 0.0 && alpha[t] > 0.0);
      const bool can_shrink = (y[t] < 0.0 && alpha[t] < c) ||
                              (y[t] > 0.0 && alpha[t] > 0.0);
      if (can_grow && f > up) {
        up = f;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (can_shrink && f < low) {
        low = f;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i < 0 || j < 0) {
      converged = true;
      gap = 0.0;
      break;
    }
    gap = up - low;
    if (gap <= stop_gap) {
      converged = true;
      break;
    }

    const auto ii = static_cast<std::size_t>(i);
    const auto jj = static_cast<std::size_t>(j);
    const double old_i = alpha[ii];
    const double old_j = alpha[jj];
    double quad = k[ii][ii] + k[jj][jj] - 2.0 * k[ii][jj];
    if (quad <= 0.0) quad = 1e-12;

    if (y[ii] != y[jj]) {
      const double delta = (-g[ii] - g[jj]) / quad;
      const double diff = alpha[ii] - alpha[jj];
      alpha[ii] += delta;
      alpha[jj] += delta;
      if (diff > 0.0 && alpha[jj] < 0.0) {
        alpha[jj] = 0.0;
        alpha[ii] = diff;
      } else if (diff <= 0.0 && alpha[ii] < 0.0) {
        alpha[ii] = 0.0;
        alpha[jj] = -diff;
      }
      if (diff > 0.0 && alpha[ii] > c) {
        alpha[ii] = c;
        alpha[jj] = c - diff;
      } else if (diff <= 0.0 && alpha[jj] > c) {
        alpha[jj] = c;
        alpha[ii] = c + diff;
      }
    } else {
      const double delta = (g[ii] - g[jj]) / quad;
      const double sum = alpha[ii] + alpha[jj];
      alpha[ii] -= delta;
      alpha[jj] += delta;
      if (sum > c && alpha[ii] > c) {
        alpha[ii] = c;
        alpha[jj] = sum - c;
      } else if (sum <= c && alpha[jj] < 0.0) {
        alpha[jj] = 0.0;
        alpha[ii] = sum;
      }
      if (sum > c && alpha[jj] > c) {
        alpha[jj] = c;
        alpha[ii] = sum - c;
      } else if (sum <= c && alpha[ii] < 0.0) {
        alpha[ii] = 0.0;
        alpha[jj] = sum;
      }
    }

    const double di = alpha[ii] - old_i;
    const double dj = alpha[jj] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      g[t] += y[t] * (y[ii] * k[ii][t] * di + y[jj] * k[jj][t] * dj);
    }
  }

  if (!converged) {
    char msg[96];
    std::snprintf(msg, sizeof msg,
                  "dual solver stopped with violation gap %.3e", gap);
    throw_error(ErrorKind::convergence, msg);
  }

  // Bias from the gradient: a free support vector i satisfies
  // f(x_i) = y_i, which gives b = -y_i g_i exactly.
  double bias = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0 && alpha[t] < c) {
      bias += -y[t] * g[t];
      n_free++;
    }
  }
  if (n_free > 0) {
    bias /= static_cast<double>(n_free);
  } else {
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double f = -y[t] * g[t];
      const bool can_grow = (y[t] > 0.0 && alpha[t] < c) ||
                            (y[t] < 0.0 && alpha[t] > 0.0);
      const bool can_shrink = (y[t] < 0.0 && alpha[t] < c) ||
                              (y[t] > 0.0 && alpha[t] > 0.0);
      if (can_grow) up = std::max(up, f);
      if (can_shrink) low = std::min(low, f);
    }
    bias = (up + low) / 2.0;
  }
  model.bias = bias;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support_coefficients.push_back(alpha[t] * y[t]);
      model.support_samples.push_back(x[t]);
    }
  }
  return model;
}

Prediction predict(const TrainedModel& model,
                   const std::vector<double>& sample) {
  if (sample.size() != model.feature_subset.size()) {
    throw_error(ErrorKind::shape,
                "sample dimensionality does not match the model subset");
  }
  std::vector<double> z(sample.size());
  for (std::size_t j = 0; j < sample.size(); ++j) {
    z[j] = (sample[j] - model.feature_means[j]) / model.feature_scales[j];
  }
  double value = model.bias;
  for (std::size_t s = 0; s < model.support_samples.size(); ++s) {
    value += model.support_coefficients[s] *
             kernel_eval(model.kernel, model.support_samples[s], z);
  }
  Prediction p;
  p.margin = value;
  p.label = value >= 0.0 ? 1 : 0;
  return p;
}

std::vector<double> column_means(
    const std::vector<std::vector<double>>& rows,
    const std::vector<std::size_t>& row_indices) {
  if (row_indices.empty()) {
    throw_error(ErrorKind::empty_input, "no rows to average");
  }
  const std::size_t d = rows[row_indices[0]].size();
  std::vector<double> means(d, 0.0);
  std::vector<std::size_t> counts(d, 0);
  for (std::size_t r : row_indices) {
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isnan(rows[r][j])) {
        means[j] += rows[r][j];
        counts[j]++;
      }
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    means[j] = counts[j] > 0 ? means[j] / static_cast<double>(counts[j]) : 0.0;
  }
  return means;
}

namespace {

std::vector<double> imputed_row(const std::vector<double>& row,
                                const std::vector<double>& means) {
  std::vector<double> out(row);
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (std::isnan(out[j])) out[j] = means[j];
  }
  return out;
}

}  // namespace

ConfusionReport cross_validate(const std::vector<std::vector<double>>& matrix,
                               const std::vector<int>& labels,
                               const CvOptions& options) {
  const std::size_t n = matrix.size();
  if (n == 0) throw_error(ErrorKind::empty_input, "empty dataset");
  if (labels.size() != n) {
    throw_error(ErrorKind::shape, "label count does not match row count");
  }
  const std::size_t d = matrix[0].size();
  for (const auto& row : matrix) {
    if (row.size() != d) {
      throw_error(ErrorKind::shape, "ragged feature matrix");
    }
  }
  std::size_t class_count[2] = {0, 0};
  for (int label : labels) {
    if (label != 0 && label != 1) {
      throw_error(ErrorKind::invalid_argument, "labels must be 0 or 1");
    }
    class_count[label]++;
  }
  if (class_count[0] == 0 || class_count[1] == 0) {
    throw_error(ErrorKind::invalid_argument, "both classes must be present");
  }
  if (options.repeats == 0) {
    throw_error(ErrorKind::invalid_argument, "need at least one repeat");
  }

  std::size_t folds = options.folds;
  if (options.scheme == CvScheme::leave_one_out) {
    folds = n;
  } else {
    if (folds < 2) {
      throw_error(ErrorKind::invalid_argument, "need at least two folds");
    }
    if (class_count[0] < folds || class_count[1] < folds) {
      throw_error(ErrorKind::invalid_argument,
                  "fold count exceeds the size of a class");
    }
  }
  for (std::size_t f : options.fixed_subset) {
    if (f >= d) {
      throw_error(ErrorKind::invalid_argument,
                  "fixed subset index out of range");
    }
  }

  ConfusionReport report;
  report.n_repeats = options.repeats;
  if (options.scheme == CvScheme::leave_one_out) {
    report.scheme = "leave-one-subject-out";
  } else {
    report.scheme = "stratified " + std::to_string(folds) + "-fold";
  }

  for (std::size_t rep = 0; rep < options.repeats; ++rep) {
    std::vector<std::size_t> fold_of(n);
    if (options.scheme == CvScheme::leave_one_out) {
      std::iota(fold_of.begin(), fold_of.end(), 0);
    } else {
      Rng rng(derive_seed(options.seed, rep));
      for (int cls = 0; cls < 2; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
          if (labels[i] == cls) members.push_back(i);
        }
        rng.shuffle(members);
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
          fold_of[members[pos]] = pos % folds;
        }
      }
    }

    ConfusionCounts cm{};
    for (std::size_t fold = 0; fold < folds; ++fold) {
      std::vector<std::size_t> train_rows;
      std::vector<std::size_t> test_rows;
      for (std::size_t i = 0; i < n; ++i) {
        (fold_of[i] == fold ? test_rows : train_rows).push_back(i);
      }
      if (test_rows.empty()) continue;

      const std::vector<double> means = column_means(matrix, train_rows);
      std::vector<std::vector<double>> train_matrix;
      std::vector<int> train_labels;
      train_matrix.reserve(train_rows.size());
      for (std::size_t i : train_rows) {
        train_matrix.push_back(imputed_row(matrix[i], means));
        train_labels.push_back(labels[i]);
      }
      const LabeledDataset train_ds =
          LabeledDataset::from_matrix(std::move(train_matrix),
                                      std::move(train_labels));

      std::vector<std::size_t> subset = options.fixed_subset;
      if (subset.empty()) {
        const WeightVector w =
            relieff_weights(train_ds, options.selection.relieff_k);
        subset = select_top_k(w, options.selection.n_features);
      }

      const TrainedModel model =
          train(train_ds, subset, options.kernel, options.c,
                derive_seed(options.seed, rep * folds + fold));

      for (std::size_t i : test_rows) {
        const std::vector<double> full = imputed_row(matrix[i], means);
        std::vector<double> row(subset.size());
        for (std::size_t j = 0; j < subset.size(); ++j) {
          row[j] = full[subset[j]];
        }
        const Prediction p = predict(model, row);
        cm[static_cast<std::size_t>(labels[i])]
          [static_cast<std::size_t>(p.label)]++;
      }
    }
    report.per_repeat.push_back(cm);
  }

  for (int t = 0; t < 2; ++t) {
    for (int p = 0; p < 2; ++p) {
      double mean = 0.0;
      std::vector<double> pct(options.repeats);
      for (std::size_t rep = 0; rep < options.repeats; ++rep) {
        const auto& cm = report.per_repeat[rep];
        const double row_total =
            static_cast<double>(cm[t][0] + cm[t][1]);
        pct[rep] = 100.0 * static_cast<double>(cm[t][p]) / row_total;
        mean += pct[rep];
      }
      mean /= static_cast<double>(options.repeats);
      double var = 0.0;
      for (double v : pct) var += (v - mean) * (v - mean);
      var /= static_cast<double>(options.repeats);
      report.mean_pct[t][p] = mean;
      report.sd_pct[t][p] = std::sqrt(var);
    }
  }
  return report;
}

std::string render_confusion_table(const ConfusionReport& report) {
  auto cell = [](double mean, double sd) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f%%±%.1f%%", mean, sd);
    return std::string(buf);
  };
  auto pad = [](std::string s, std::size_t width) {
    while (s.size() < width) s.push_back(' ');
    return s;
  };
  std::string out;
  out += "scheme: " + report.scheme + ", repeats: " +
         std::to_string(report.n_repeats) + "\n";
  out += pad("true\\predicted", 16) + pad("regular", 16) + "dyslexic\n";
  const char* row_names[2] = {"regular", "dyslexic"};
  for (int t = 0; t < 2; ++t) {
    out += pad(row_names[t], 16);
    // The sign glyph is two bytes; pad one wider so columns line up.
    out += pad(cell(report.mean_pct[t][0], report.sd_pct[t][0]), 17);
    out += cell(report.mean_pct[t][1], report.sd_pct[t][1]);
    out += "\n";
  }
  return out;
}

}  // namespace erp
