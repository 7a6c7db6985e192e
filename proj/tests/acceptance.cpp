// Shipping checks for the toolkit.  Each criterion prints exactly one
// line, "criterion N: PASS - ..." or "criterion N: FAIL - ...", and the
// binary exits nonzero if anything fails.
//
// Criterion 1 is a statement rather than a computation: the reference
// clinical accuracies were produced from a 32-subject recording set that
// cannot be redistributed, so they are not reproducible here.  Criteria
// 2-9 substitute synthetic datasets with planted, known structure, and
// criterion 10 pins the output formats.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "erp/config.hpp"
#include "erp/errors.hpp"
#include "erp/features.hpp"
#include "erp/fft.hpp"
#include "erp/io.hpp"
#include "erp/pipeline.hpp"
#include "erp/relieff.hpp"
#include "erp/rng.hpp"
#include "erp/roi.hpp"
#include "erp/svm.hpp"
#include "erp/synth.hpp"
#include "erp/types.hpp"
#include "erp/wavelet.hpp"

namespace {

namespace fs = std::filesystem;

using erp::BoundaryMode;
using erp::ClassLabel;
using erp::ConfusionReport;
using erp::CvOptions;
using erp::FeatureTable;
using erp::LabeledDataset;
using erp::Pipeline;
using erp::PipelineConfig;
using erp::Rng;
using erp::RunOptions;
using erp::SamplingMeta;
using erp::Spectrum;
using erp::Stage;
using erp::WaveletFilterPair;
using erp::WeightVector;

int g_failures = 0;

void print_line(int n, bool ok, const std::string& text) {
  std::printf("criterion %d: %s - %s\n", n, ok ? "PASS" : "FAIL",
              text.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

// The check body either returns its pass description or throws with the
// failure explanation.
void criterion(int n, const std::function<std::string()>& body) {
  try {
    print_line(n, true, body());
  } catch (const std::exception& e) {
    print_line(n, false, e.what());
  } catch (...) {
    print_line(n, false, "unexpected non-standard exception");
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::runtime_error(message);
}

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

// |a - b| with a mixed absolute/relative budget.
bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

std::vector<double> random_signal(Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

// --- synthetic end-to-end chain (criteria 2, 3, 4, 10) -----------------

struct ChainData {
  FeatureTable table;
  std::vector<int> labels;
  double seconds = 0.0;
};

// Runs synth -> preprocess -> extract through the real pipeline stages in
// a scratch work directory and loads the resulting feature matrix.
ChainData run_chain(const std::string& scenario, const std::string& leaf) {
  const fs::path work = fs::temp_directory_path() / leaf;
  fs::remove_all(work);

  PipelineConfig cfg = erp::parse_config_text("", "acceptance");
  cfg.work_dir = work.string();
  cfg.scenario = scenario;
  cfg.seed = 42;

  const auto t0 = std::chrono::steady_clock::now();
  Pipeline pipeline(cfg, RunOptions{});
  pipeline.run_stage(Stage::synth);
  pipeline.run_stage(Stage::preprocess);
  pipeline.run_stage(Stage::extract);
  const auto t1 = std::chrono::steady_clock::now();

  ChainData out;
  out.table =
      erp::read_feature_matrix_csv((work / "extract" / "features.csv").string());
  out.seconds = std::chrono::duration<double>(t1 - t0).count();
  for (ClassLabel label : out.table.labels) {
    out.labels.push_back(label == ClassLabel::dyslexic ? 1 : 0);
  }
  fs::remove_all(work);
  return out;
}

CvOptions cv_options(std::size_t n_features) {
  CvOptions options;  // stratified 5-fold, 20 repeats, linear kernel
  options.seed = 42;
  options.selection.relieff_k = 10;
  options.selection.n_features = n_features;
  return options;
}

// Results shared across criteria; empty when the chain could not be run.
std::optional<ChainData> g_default_chain;
std::optional<ConfusionReport> g_report60;

// --- criterion 6 helper: direct-transform spectrum ---------------------

Spectrum naive_spectrum(const std::vector<double>& x, double rate_hz) {
  const std::size_t n = x.size();
  Spectrum spec;
  spec.rate_hz = rate_hz;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * M_PI * static_cast<double>(k) *
                           static_cast<double>(t) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    const double mag = std::abs(acc);
    spec.magnitudes.push_back(mag);
    spec.psd.push_back(mag * mag / static_cast<double>(n));
    spec.freqs_hz.push_back(static_cast<double>(k) * rate_hz /
                            static_cast<double>(n));
  }
  return spec;
}

// --- criterion 8 helper: exhaustive neighborhood-weighting oracle ------

std::vector<double> oracle_weights(
    const std::vector<std::vector<double>>& matrix,
    const std::vector<int>& labels, std::size_t k) {
  const std::size_t n = matrix.size();
  const std::size_t d = matrix[0].size();

  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& row : matrix) {
    for (std::size_t f = 0; f < d; ++f) {
      lo[f] = std::min(lo[f], row[f]);
      hi[f] = std::max(hi[f], row[f]);
    }
  }
  std::vector<std::vector<double>> z(n, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < d; ++f) {
      const double span = hi[f] - lo[f];
      z[i][f] = span > 0.0 ? (matrix[i][f] - lo[f]) / span : 0.0;
    }
  }

  std::vector<double> weights(d, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<std::pair<double, std::size_t>> hits, misses;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == t) continue;
      double dist = 0.0;
      for (std::size_t f = 0; f < d; ++f) {
        dist += std::abs(z[t][f] - z[j][f]);
      }
      (labels[j] == labels[t] ? hits : misses).emplace_back(dist, j);
    }
    std::sort(hits.begin(), hits.end());
    std::sort(misses.begin(), misses.end());
    for (std::size_t f = 0; f < d; ++f) {
      double hit_sum = 0.0, miss_sum = 0.0;
      for (std::size_t m = 0; m < k; ++m) {
        hit_sum += std::abs(z[t][f] - z[hits[m].second][f]);
        miss_sum += std::abs(z[t][f] - z[misses[m].second][f]);
      }
      weights[f] += (miss_sum - hit_sum) / static_cast<double>(k);
    }
  }
  for (std::size_t f = 0; f < d; ++f) {
    weights[f] /= static_cast<double>(n);
    if (!(hi[f] - lo[f] > 0.0)) weights[f] = 0.0;
  }
  return weights;
}

std::size_t count_substring(const std::string& text,
                           const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace

int main() {
  criterion(1, [] {
    return std::string(
        "stated: the reference clinical accuracy tables derive from an "
        "unavailable 32-subject recording set and cannot be reproduced; "
        "criteria 2-9 verify the method on synthetic data instead");
  });

  criterion(2, [] {
    g_default_chain = run_chain("default", "acceptance_default");
    const ChainData& chain = *g_default_chain;

    const auto t0 = std::chrono::steady_clock::now();
    g_report60 =
        erp::cross_validate(chain.table.matrix, chain.labels, cv_options(60));
    const ConfusionReport report10 =
        erp::cross_validate(chain.table.matrix, chain.labels, cv_options(10));
    const auto t1 = std::chrono::steady_clock::now();
    const double total_seconds =
        chain.seconds + std::chrono::duration<double>(t1 - t0).count();

    const double acc60 = g_report60->mean_diagonal();
    const double acc10 = report10.mean_diagonal();
    require(acc60 >= 85.0,
            fmt("60-feature mean diagonal %.1f%% is below 85%%", acc60));
    require(acc10 >= 75.0,
            fmt("10-feature mean diagonal %.1f%% is below 75%%", acc10));
    require(acc10 >= 0.75 * acc60,
            fmt("10-feature accuracy %.1f%% retains less than 75%% of "
                "%.1f%%",
                acc10, acc60));
    require(total_seconds < 120.0,
            fmt("end-to-end run took %.0f s (budget 120 s)", total_seconds));
    return fmt("synthetic end-to-end: mean diagonal %.1f%% with 60 "
               "features, %.1f%% with 10, in %.0f s",
               acc60, acc10, total_seconds);
  });

  criterion(3, [] {
    require(g_default_chain.has_value(),
            "default-scenario feature matrix unavailable (criterion 2 "
            "failed earlier)");
    const ChainData& chain = *g_default_chain;

    // Whole-dataset weighting here is deliberate: the question is where
    // the top features live on the scalp, not an accuracy estimate.
    std::vector<std::size_t> all_rows(chain.table.matrix.size());
    for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
    const std::vector<double> means =
        erp::column_means(chain.table.matrix, all_rows);
    std::vector<std::vector<double>> imputed = chain.table.matrix;
    for (auto& row : imputed) {
      for (std::size_t f = 0; f < row.size(); ++f) {
        if (std::isnan(row[f])) row[f] = means[f];
      }
    }
    const LabeledDataset ds =
        LabeledDataset::from_matrix(std::move(imputed), chain.labels);
    const WeightVector weights = erp::relieff_weights(ds, 10);
    const std::vector<std::size_t> selected = erp::select_top_k(weights, 60);

    const erp::SynthConfig scenario = erp::default_dyslexia_scenario();
    const std::set<std::string> mask(scenario.effect_mask.begin(),
                                     scenario.effect_mask.end());
    std::size_t on_mask = 0;
    for (std::size_t idx : selected) {
      if (mask.count(chain.table.columns[idx].electrode) > 0) ++on_mask;
    }

    const erp::ElectrodeShares shares =
        erp::attribute_selection(selected, chain.table.columns, weights);
    const erp::RegionReport region_report =
        erp::aggregate_regions(shares, erp::ElectrodeLayout::standard_64());

    require(on_mask * 10 >= selected.size() * 7,
            fmt("only %.0f of %.0f selected features fall on electrodes "
                "carrying the planted effect",
                static_cast<double>(on_mask),
                static_cast<double>(selected.size())));
    require(region_report.asymmetry_index > 0.4,
            fmt("hemispheric asymmetry %.2f is not > 0.4",
                region_report.asymmetry_index));
    return fmt("scalp attribution: %.0f/60 top features on planted "
               "electrodes, asymmetry index %.2f",
               static_cast<double>(on_mask), region_report.asymmetry_index);
  });

  criterion(4, [] {
    const ChainData chain = run_chain("hp_only", "acceptance_hp_only");
    const ConfusionReport report =
        erp::cross_validate(chain.table.matrix, chain.labels, cv_options(60));
    const double acc = report.mean_diagonal();
    require(acc >= 75.0,
            fmt("mean diagonal %.1f%% is below 75%% when only "
                "high-frequency band power separates the classes",
                acc));
    return fmt("band-power-only variant still classifies: mean diagonal "
               "%.1f%%",
               acc);
  });

  criterion(5, [] {
    Rng rng(71);
    double worst_recon = 0.0;
    for (BoundaryMode mode :
         {BoundaryMode::periodic, BoundaryMode::symmetric}) {
      for (std::size_t n : {64u, 100u, 448u, 1000u}) {
        const auto x = random_signal(rng, n);
        const auto dec = erp::dwt_decompose(
            x, 5, WaveletFilterPair::daubechies4(), mode);
        worst_recon = std::max(worst_recon, rel_l2(erp::reconstruct(dec), x));
      }
    }
    require(worst_recon <= 1e-8,
            fmt("worst reconstruction error %.2e exceeds 1e-8", worst_recon));

    const auto& f = WaveletFilterPair::daubechies4();
    double h_sum = 0.0;
    for (double v : f.lowpass) h_sum += v;
    require(std::abs(h_sum - std::sqrt(2.0)) < 1e-12,
            "lowpass coefficients do not sum to sqrt(2)");
    for (int shift = -3; shift <= 3; ++shift) {
      double hh = 0.0;
      for (int k = 0; k < 8; ++k) {
        const int j = k + 2 * shift;
        if (j >= 0 && j < 8) hh += f.lowpass[k] * f.lowpass[j];
      }
      require(std::abs(hh - (shift == 0 ? 1.0 : 0.0)) < 1e-12,
              "lowpass filter is not orthonormal under even shifts");
    }
    for (int p = 0; p <= 3; ++p) {
      double moment = 0.0;
      for (int k = 0; k < 8; ++k) {
        moment += f.highpass[k] * std::pow(static_cast<double>(k), p);
      }
      require(std::abs(moment) < 1e-10,
              fmt("highpass does not annihilate degree-%.0f polynomials",
                  static_cast<double>(p)));
    }

    double worst_split = 0.0;
    for (BoundaryMode mode :
         {BoundaryMode::periodic, BoundaryMode::symmetric}) {
      for (std::size_t n : {64u, 100u, 448u, 1000u}) {
        const auto x = random_signal(rng, n);
        const erp::LpHp parts = erp::split_signal(
            x, 5, WaveletFilterPair::daubechies4(), mode);
        std::vector<double> sum(n);
        for (std::size_t i = 0; i < n; ++i) sum[i] = parts.lp[i] + parts.hp[i];
        worst_split = std::max(worst_split, rel_l2(sum, x));
      }
    }
    require(worst_split <= 1e-10,
            fmt("lp+hp deviates from the input by %.2e", worst_split));
    return fmt("wavelet: reconstruction error <= %.1e, filter invariants "
               "hold, lp+hp complementarity <= %.1e",
               worst_recon, worst_split);
  });

  criterion(6, [] {
    const double rate = 256.0;
    const double bands[8][2] = {{0.5, 4.0},  {4.0, 8.0},   {8.0, 13.0},
                                {13.0, 20.0}, {20.0, 40.0}, {40.0, 60.0},
                                {60.0, 80.0}, {80.0, 100.0}};
    Rng rng(72);
    const std::size_t lengths[3] = {16, 100, 448};
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = lengths[trial % 3];
      const auto x = random_signal(rng, n);
      const Spectrum fast = erp::periodogram(x, rate);
      const Spectrum direct = naive_spectrum(x, rate);

      require(close(erp::spectral_flatness(fast),
                    erp::spectral_flatness(direct), 1e-9),
              "spectral flatness disagrees with the direct transform");
      require(close(erp::spectral_rolloff(fast, 0.7),
                    erp::spectral_rolloff(direct, 0.7), 1e-9),
              "spectral rolloff disagrees with the direct transform");
      require(close(erp::spectral_centroid(fast),
                    erp::spectral_centroid(direct), 1e-9),
              "spectral centroid disagrees with the direct transform");
      require(close(erp::spectral_entropy(fast),
                    erp::spectral_entropy(direct), 1e-9),
              "spectral entropy disagrees with the direct transform");
      const erp::DeformationWidth dw_fast =
          erp::spectral_deformation_width(fast);
      const erp::DeformationWidth dw_direct =
          erp::spectral_deformation_width(direct);
      require(close(dw_fast.deformation, dw_direct.deformation, 1e-9),
              "spectral deformation disagrees with the direct transform");
      require(close(dw_fast.width, dw_direct.width, 1e-9),
              "spectral width disagrees with the direct transform");
      for (const auto& band : bands) {
        require(close(erp::band_power(fast, band[0], band[1]),
                      erp::band_power(direct, band[0], band[1]), 1e-9),
                "band power disagrees with the direct transform");
      }

      // Energy conservation between the time and frequency domains.
      double time_energy = 0.0;
      for (double v : x) time_energy += v * v;
      double freq_energy = 0.0;
      for (const auto& bin : erp::fft(x)) freq_energy += std::norm(bin);
      freq_energy /= static_cast<double>(n);
      require(close(freq_energy, time_energy, 1e-9),
              "transform energy deviates from signal energy");
    }
    return std::string(
        "all spectral features match an O(N^2) direct-transform oracle "
        "within 1e-9 on 100 signals; energy is conserved");
  });

  criterion(7, [] {
    const SamplingMeta meta;
    const erp::TimeWindow window{100.0, 200.0};
    const double nyquist = meta.rate_hz / 2.0;
    Rng rng(73);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto x = random_signal(rng, meta.epoch_samples());
      const Spectrum spec = erp::periodogram(x, meta.rate_hz);
      const double bins = static_cast<double>(spec.psd.size());

      const double zcr = erp::zero_crossing_rate(x);
      require(zcr >= 0.0 && zcr <= 1.0, "zero-crossing rate out of [0,1]");
      const double flat = erp::spectral_flatness(spec);
      require(flat >= 0.0 && flat <= 1.0 + 1e-12,
              "spectral flatness out of [0,1]");
      const double sent = erp::spectral_entropy(spec);
      require(sent >= 0.0 && sent <= std::log2(bins) + 1e-9,
              "spectral entropy out of [0, log2(bins)]");
      const double hent = erp::histogram_entropy(x, 16);
      require(hent >= 0.0 && hent <= std::log10(16.0) + 1e-9,
              "histogram entropy out of [0, log10(bins)]");
      const double roll = erp::spectral_rolloff(spec, 0.7);
      require(roll >= 0.0 && roll <= nyquist,
              "spectral rolloff outside [0, nyquist]");
      const double cent = erp::spectral_centroid(spec);
      require(cent >= 0.0 && cent <= nyquist,
              "spectral centroid outside [0, nyquist]");
      const erp::DeformationWidth dw = erp::spectral_deformation_width(spec);
      require(dw.width >= 0.0, "spectral width went negative");
      require(erp::positive_area(x, meta, window) >= 0.0,
              "positive area went negative");
      require(erp::signal_energy(x) >= 0.0, "signal energy went negative");

      // Positive amplitude scaling: energies scale by c^2, amplitudes by
      // c, and every shape/timing feature stays put.
      const double c = 0.25 + 3.75 * rng.uniform();
      std::vector<double> scaled(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = c * x[i];
      const Spectrum sspec = erp::periodogram(scaled, meta.rate_hz);

      require(close(erp::signal_energy(scaled), c * c * erp::signal_energy(x),
                    1e-9),
              "signal energy does not scale by c^2");
      require(close(erp::abs_amplitude(scaled), c * erp::abs_amplitude(x),
                    1e-9),
              "peak amplitude does not scale by c");
      require(close(erp::positive_area(scaled, meta, window),
                    c * erp::positive_area(x, meta, window), 1e-9),
              "positive area does not scale by c");
      require(erp::latency(scaled, meta, window) ==
                  erp::latency(x, meta, window),
              "peak latency moved under amplitude scaling");
      require(erp::zero_crossing_rate(scaled) == zcr,
              "zero-crossing rate changed under amplitude scaling");
      require(close(erp::spectral_flatness(sspec), flat, 1e-9),
              "spectral flatness changed under amplitude scaling");
      require(close(erp::spectral_centroid(sspec), cent, 1e-9),
              "spectral centroid changed under amplitude scaling");
      require(close(erp::spectral_rolloff(sspec, 0.7), roll, 1e-9),
              "spectral rolloff changed under amplitude scaling");
      require(close(erp::spectral_entropy(sspec), sent, 1e-9),
              "spectral entropy changed under amplitude scaling");
      const erp::DeformationWidth sdw = erp::spectral_deformation_width(sspec);
      require(close(sdw.deformation, dw.deformation, 1e-9),
              "spectral deformation changed under amplitude scaling");
      const erp::IntervalStats is = erp::derivative_interval_stats(x);
      const erp::IntervalStats sis = erp::derivative_interval_stats(scaled);
      require(close(sis.mean, is.mean, 1e-9) && close(sis.sd, is.sd, 1e-9) &&
                  close(sis.skewness, is.skewness, 1e-9),
              "interval statistics changed under amplitude scaling");
    }
    return std::string(
        "range bounds and amplitude-scaling behavior hold for every "
        "feature on 1000 random inputs");
  });

  criterion(8, [] {
    Rng rng(74);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t per_class = 4 + rng.below(2);
      const std::size_t d = 1 + rng.below(5);
      const std::size_t k = 1 + rng.below(3);
      std::vector<std::vector<double>> matrix;
      std::vector<int> labels;
      for (std::size_t i = 0; i < 2 * per_class; ++i) {
        matrix.push_back(random_signal(rng, d));
        labels.push_back(i < per_class ? 0 : 1);
      }
      const WeightVector got = erp::relieff_weights(
          LabeledDataset::from_matrix(matrix, labels), k);
      const std::vector<double> expected = oracle_weights(matrix, labels, k);
      for (std::size_t f = 0; f < d; ++f) {
        worst = std::max(worst, std::abs(got.weights[f] - expected[f]));
      }
    }
    require(worst <= 1e-12,
            fmt("weights deviate from the exhaustive oracle by %.2e", worst));

    // Duplicated and constant columns.
    std::vector<std::vector<double>> matrix;
    std::vector<int> labels;
    for (std::size_t i = 0; i < 10; ++i) {
      auto row = random_signal(rng, 3);
      row.push_back(row[1]);  // duplicate column 1
      row.push_back(42.0);    // constant column
      matrix.push_back(std::move(row));
      labels.push_back(i < 5 ? 0 : 1);
    }
    const WeightVector w = erp::relieff_weights(
        LabeledDataset::from_matrix(matrix, labels), 2);
    require(w.weights[1] == w.weights[3],
            "duplicated columns received different weights");
    require(w.weights[4] == 0.0, "constant column weight is not 0");

    int ranked_first = 0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::vector<double>> m;
      std::vector<int> l;
      for (int i = 0; i < 20; ++i) {
        const int label = i < 10 ? 0 : 1;
        std::vector<double> row = random_signal(rng, 5);
        row[0] = 2.0 * label + 0.1 * rng.normal();
        m.push_back(std::move(row));
        l.push_back(label);
      }
      const WeightVector pw =
          erp::relieff_weights(LabeledDataset::from_matrix(m, l), 3);
      if (erp::select_top_k(pw, 1)[0] == 0) ++ranked_first;
    }
    require(ranked_first >= 95,
            fmt("planted informative feature ranked first in only %.0f of "
                "100 trials",
                static_cast<double>(ranked_first)));
    return fmt("neighborhood weights match the exhaustive oracle within "
               "1e-12 on 50 datasets; planted feature ranked first in "
               "%.0f/100 trials",
               static_cast<double>(ranked_first));
  });

  criterion(9, [] {
    // Linearly separable blobs must be fit without training errors.
    Rng rng(75);
    std::vector<std::vector<double>> matrix;
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) {
      const int label = i < 10 ? 0 : 1;
      matrix.push_back({(label == 0 ? -2.0 : 2.0) + 0.1 * rng.normal(),
                        rng.normal()});
      labels.push_back(label);
    }
    const LabeledDataset ds = LabeledDataset::from_matrix(matrix, labels);
    const erp::TrainedModel model =
        erp::train(ds, {0, 1}, erp::KernelSpec{}, 1.0, 42);
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      require(erp::predict(model, matrix[i]).label == labels[i],
              "separable training set was not fit exactly");
    }

    // Labels carrying no information must score at chance level.
    std::vector<std::vector<double>> noise;
    std::vector<int> null_labels;
    for (int i = 0; i < 24; ++i) {
      noise.push_back(random_signal(rng, 5));
      null_labels.push_back(i % 2);
    }
    CvOptions options;
    options.seed = 9;
    options.selection.relieff_k = 3;
    options.selection.n_features = 2;
    const ConfusionReport null_report =
        erp::cross_validate(noise, null_labels, options);
    const double null_acc = null_report.mean_diagonal();
    require(null_acc >= 35.0 && null_acc <= 65.0,
            fmt("uninformative labels scored %.1f%%, outside 50%% +/- 15%%",
                null_acc));

    // Same seed, same report, to the bit.
    const ConfusionReport again =
        erp::cross_validate(noise, null_labels, options);
    require(again.mean_pct == null_report.mean_pct &&
                again.sd_pct == null_report.sd_pct &&
                again.per_repeat == null_report.per_repeat,
            "repeated cross-validation with one seed was not bit-identical");
    return fmt("separable set fit exactly; chance-level labels score "
               "%.1f%%; seeded cross-validation is bit-reproducible",
               null_acc);
  });

  criterion(10, [] {
    require(g_default_chain.has_value() && g_report60.has_value(),
            "default-scenario results unavailable (criterion 2 failed "
            "earlier)");
    const std::string table = erp::render_confusion_table(*g_report60);
    require(table.find("scheme: stratified 5-fold, repeats: 20\n") == 0,
            "confusion table header line is wrong");
    require(table.find("true\\predicted") != std::string::npos,
            "confusion table lacks the true-by-predicted corner label");
    require(table.find("regular") != std::string::npos &&
                table.find("dyslexic") != std::string::npos,
            "confusion table lacks the class row labels");
    require(count_substring(table, "%\xC2\xB1") == 4,
            "confusion table does not have four mean%+-sd% cells");

    const std::size_t n_columns = g_default_chain->table.columns.size();
    const std::size_t registry_size = erp::default_registry().size();
    require(registry_size == 27,
            fmt("default registry has %.0f descriptors, expected 27",
                static_cast<double>(registry_size)));
    require(n_columns == 64 * registry_size,
            fmt("feature matrix has %.0f columns, expected 64 x 27 = 1728",
                static_cast<double>(n_columns)));
    return std::string(
        "confusion tables render in the two-row mean%+-sd% layout and the "
        "feature matrix is 64 electrodes x 27 descriptors = 1728 columns");
  });

  if (g_failures == 0) {
    std::printf("all 10 criteria pass\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
