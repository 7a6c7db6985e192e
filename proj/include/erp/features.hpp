#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "erp/types.hpp"
#include "erp/wavelet.hpp"

namespace erp {

// Window in milliseconds relative to stimulus onset.
struct TimeWindow {
  double start_ms = 0.0;
  double end_ms = 0.0;
};

enum class SignalPart { lp, hp, full };

const char* to_string(SignalPart part);
SignalPart signal_part_from_string(const std::string& s);

// One feature column recipe: which scalar (kind), from which signal part,
// over which window, with which parameters. `name` must be unique within a
// registry and becomes part of the output column name.
struct FeatureDescriptor {
  std::string name;
  std::string kind;
  SignalPart part = SignalPart::lp;
  std::optional<TimeWindow> window;
  std::map<std::string, double> params;
};

using FeatureRegistry = std::vector<FeatureDescriptor>;

// The 27-descriptor set the pipeline ships with: temporal shape features
// from the LP part, interval/spectral statistics from the HP part, and
// band-integrated PSD values.
const FeatureRegistry& default_registry();

void validate_registry(const FeatureRegistry& registry);

// One-sided spectrum. psd = magnitudes^2 / N; freqs run 0 .. rate/2.
struct Spectrum {
  std::vector<double> magnitudes;
  std::vector<double> psd;
  std::vector<double> freqs_hz;
  double rate_hz = 0.0;
};

Spectrum periodogram(const std::vector<double>& x, double rate_hz);

// --- LP (temporal) features --------------------------------------------
double latency(const std::vector<double>& lp, const SamplingMeta& meta,
               const TimeWindow& window);
double abs_amplitude(const std::vector<double>& lp);
double positive_area(const std::vector<double>& lp, const SamplingMeta& meta,
                     const TimeWindow& window);
double max_peak_ratio(const std::vector<double>& lp, const SamplingMeta& meta,
                      const TimeWindow& window);
double signal_energy(const std::vector<double>& x);
double histogram_entropy(const std::vector<double>& x, std::size_t bins);

// --- HP (statistical) features -----------------------------------------
double zero_crossing_rate(const std::vector<double>& hp);

struct IntervalStats {
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
};

// Statistics of the sample intervals between consecutive local extrema
// (sign changes of the first difference). Throws insufficient_structure
// when fewer than 3 intervals exist.
IntervalStats derivative_interval_stats(const std::vector<double>& hp);

// --- spectral features --------------------------------------------------
double spectral_flatness(const Spectrum& spec);
double spectral_rolloff(const Spectrum& spec, double fraction);

struct DeformationWidth {
  double deformation = 0.0;
  double width = 0.0;
};

DeformationWidth spectral_deformation_width(const Spectrum& spec);
double spectral_centroid(const Spectrum& spec);
double spectral_entropy(const Spectrum& spec);
double band_power(const Spectrum& spec, double lo_hz, double hi_hz);

// --- assembly -----------------------------------------------------------

struct ColumnRef {
  std::string electrode;
  std::string feature;  // descriptor name
};

struct FeatureVector {
  std::vector<double> values;  // NaN marks an undefined feature
  std::vector<ColumnRef> layout;  // electrode-major, registry order within
  std::string subject_id;
  ClassLabel class_label = ClassLabel::unknown;
};

// Evaluates every descriptor on every channel. Undefined results
// (insufficient structure, degenerate spectra) become NaN sentinels.
FeatureVector extract_feature_vector(const std::vector<LpHp>& parts,
                                     const std::vector<std::string>& channels,
                                     const SamplingMeta& meta,
                                     const FeatureRegistry& registry);

}  // namespace erp
