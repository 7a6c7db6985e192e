#include "erp/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_set>

#include "erp/errors.hpp"
#include "erp/fft.hpp"

namespace erp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SampleRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

// Maps a ms window onto epoch sample indices. Bounds are inclusive; a
// sample belongs to the window when its latency lies in [start, end]
// within a small tolerance so that exact grid landings are kept.
SampleRange window_sample_range(const std::vector<double>& x,
                                const SamplingMeta& meta,
                                const TimeWindow& window) {
  if (x.size() != meta.epoch_samples()) {
    throw_error(ErrorKind::shape,
                "sequence length does not match the epoch geometry");
  }
  if (!(window.start_ms < window.end_ms)) {
    throw_error(ErrorKind::invalid_argument,
                "time window start must precede its end");
  }
  if (window.start_ms < 0.0 || window.end_ms > meta.post_stimulus_ms()) {
    throw_error(ErrorKind::invalid_argument,
                "time window extends outside the post-stimulus span");
  }
  constexpr double eps = 1e-9;
  std::optional<SampleRange> range;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ms = meta.ms_at(i);
    if (ms < window.start_ms - eps || ms > window.end_ms + eps) continue;
    if (!range) range = SampleRange{i, i};
    range->last = i;
  }
  if (!range) {
    throw_error(ErrorKind::invalid_argument,
                "time window contains no samples");
  }
  return *range;
}

std::size_t argmax_in(const std::vector<double>& x, const SampleRange& r) {
  std::size_t best = r.first;
  for (std::size_t i = r.first + 1; i <= r.last; ++i) {
    if (x[i] > x[best]) best = i;  // strict: ties keep the earliest index
  }
  return best;
}

}  // namespace

const char* to_string(SignalPart part) {
  switch (part) {
    case SignalPart::lp: return "lp";
    case SignalPart::hp: return "hp";
    case SignalPart::full: return "full";
  }
  return "?";
}

SignalPart signal_part_from_string(const std::string& s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "lp") return SignalPart::lp;
  if (lower == "hp") return SignalPart::hp;
  if (lower == "full") return SignalPart::full;
  throw_error(ErrorKind::config, "unknown signal part: " + s);
}

double latency(const std::vector<double>& lp, const SamplingMeta& meta,
               const TimeWindow& window) {
  const SampleRange r = window_sample_range(lp, meta, window);
  return meta.ms_at(argmax_in(lp, r));
}

double abs_amplitude(const std::vector<double>& lp) {
  if (lp.empty()) throw_error(ErrorKind::empty_input, "empty sequence");
  double best = 0.0;
  for (double v : lp) best = std::max(best, std::abs(v));
  return best;
}

double positive_area(const std::vector<double>& lp, const SamplingMeta& meta,
                     const TimeWindow& window) {
  const SampleRange r = window_sample_range(lp, meta, window);
  double area = 0.0;
  for (std::size_t i = r.first; i <= r.last; ++i) {
    area += std::max(lp[i], 0.0);
  }
  return area;
}

double max_peak_ratio(const std::vector<double>& lp, const SamplingMeta& meta,
                      const TimeWindow& window) {
  if (!(window.start_ms > 0.0)) {
    throw_error(ErrorKind::invalid_argument,
                "peak-over-time window must start after the stimulus");
  }
  const SampleRange r = window_sample_range(lp, meta, window);
  const std::size_t peak = argmax_in(lp, r);
  return lp[peak] / (meta.ms_at(peak) / 1000.0);
}

double signal_energy(const std::vector<double>& x) {
  if (x.empty()) throw_error(ErrorKind::empty_input, "empty sequence");
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double histogram_entropy(const std::vector<double>& x, std::size_t bins) {
  if (bins == 0) {
    throw_error(ErrorKind::invalid_argument, "bin count must be positive");
  }
  if (x.empty()) throw_error(ErrorKind::empty_input, "empty sequence");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  if (span == 0.0) return 0.0;  // one occupied bin
  std::vector<std::size_t> counts(bins, 0);
  for (double v : x) {
    auto bin = static_cast<std::size_t>((v - lo) / span *
                                        static_cast<double>(bins));
    counts[std::min(bin, bins - 1)]++;
  }
  const double n = static_cast<double>(x.size());
  double entropy = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    entropy -= p * std::log10(p);
  }
  return entropy;
}

double zero_crossing_rate(const std::vector<double>& hp) {
  if (hp.size() < 2) {
    throw_error(ErrorKind::length, "need at least two samples");
  }
  std::size_t crossings = 0;
  for (std::size_t i = 1; i < hp.size(); ++i) {
    if (hp[i] * hp[i - 1] < 0.0) crossings++;
  }
  return static_cast<double>(crossings) /
         static_cast<double>(hp.size() - 1);
}

IntervalStats derivative_interval_stats(const std::vector<double>& hp) {
  std::vector<double> intervals;
  if (hp.size() >= 3) {
    std::size_t previous = 0;
    bool have_previous = false;
    for (std::size_t i = 1; i + 1 < hp.size(); ++i) {
      const double before = hp[i] - hp[i - 1];
      const double after = hp[i + 1] - hp[i];
      if (before * after >= 0.0) continue;  // not a strict extremum
      if (have_previous) {
        intervals.push_back(static_cast<double>(i - previous));
      }
      previous = i;
      have_previous = true;
    }
  }
  if (intervals.size() < 3) {
    throw_error(ErrorKind::insufficient_structure,
                "fewer than three intervals between derivative sign changes");
  }
  const double n = static_cast<double>(intervals.size());
  double mean = 0.0;
  for (double v : intervals) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : intervals) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  IntervalStats stats;
  stats.mean = mean;
  stats.sd = std::sqrt(m2);
  stats.skewness = stats.sd > 0.0 ? m3 / (stats.sd * stats.sd * stats.sd) : 0.0;
  return stats;
}

Spectrum periodogram(const std::vector<double>& x, double rate_hz) {
  if (x.empty()) throw_error(ErrorKind::empty_input, "empty sequence");
  if (!(rate_hz > 0.0)) {
    throw_error(ErrorKind::invalid_argument, "sampling rate must be positive");
  }
  const std::vector<cplx> transformed = fft(x);
  const std::size_t n = x.size();
  const std::size_t bins = n / 2 + 1;
  Spectrum spec;
  spec.rate_hz = rate_hz;
  spec.magnitudes.resize(bins);
  spec.psd.resize(bins);
  spec.freqs_hz.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double mag = std::abs(transformed[k]);
    spec.magnitudes[k] = mag;
    spec.psd[k] = mag * mag / static_cast<double>(n);
    spec.freqs_hz[k] = static_cast<double>(k) * rate_hz /
                       static_cast<double>(n);
  }
  return spec;
}

double spectral_flatness(const Spectrum& spec) {
  if (spec.magnitudes.empty()) {
    throw_error(ErrorKind::empty_input, "empty spectrum");
  }
  double arith = 0.0;
  double log_sum = 0.0;
  bool has_zero = false;
  for (double m : spec.magnitudes) {
    arith += m;
    if (m <= 0.0) {
      has_zero = true;
    } else {
      log_sum += std::log(m);
    }
  }
  const double n = static_cast<double>(spec.magnitudes.size());
  arith /= n;
  if (arith == 0.0) {
    throw_error(ErrorKind::undefined_input, "all-zero magnitude spectrum");
  }
  if (has_zero) return 0.0;  // geometric mean collapses to zero
  return std::exp(log_sum / n) / arith;
}

double spectral_rolloff(const Spectrum& spec, double fraction) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw_error(ErrorKind::invalid_argument,
                "rolloff fraction must lie strictly between 0 and 1");
  }
  if (spec.psd.empty()) throw_error(ErrorKind::empty_input, "empty spectrum");
  double total = 0.0;
  for (double p : spec.psd) total += p;
  if (total <= 0.0) {
    throw_error(ErrorKind::undefined_input, "zero total spectral power");
  }
  const double target = fraction * total;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < spec.psd.size(); ++k) {
    cumulative += spec.psd[k];
    if (cumulative >= target) return spec.freqs_hz[k];
  }
  return spec.freqs_hz.back();  // reachable only through rounding
}

DeformationWidth spectral_deformation_width(const Spectrum& spec) {
  if (spec.psd.empty()) throw_error(ErrorKind::empty_input, "empty spectrum");
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < spec.psd.size(); ++k) {
    const double p = spec.psd[k];
    const double f = spec.freqs_hz[k];
    m0 += p;
    m1 += p * f;
    m2 += p * f * f;
  }
  if (m0 <= 0.0 || m1 <= 0.0) {
    throw_error(ErrorKind::undefined_input,
                "spectral moments need power above 0 Hz");
  }
  const double mean_freq = m1 / m0;
  DeformationWidth out;
  out.deformation = std::sqrt(m2 / m0) / mean_freq;
  out.width = std::sqrt(std::max(m2 / m0 - mean_freq * mean_freq, 0.0));
  return out;
}

double spectral_centroid(const Spectrum& spec) {
  if (spec.magnitudes.empty()) {
    throw_error(ErrorKind::empty_input, "empty spectrum");
  }
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < spec.magnitudes.size(); ++k) {
    weighted += spec.freqs_hz[k] * spec.magnitudes[k];
    total += spec.magnitudes[k];
  }
  if (total <= 0.0) {
    throw_error(ErrorKind::undefined_input, "all-zero magnitude spectrum");
  }
  return weighted / total;
}

double spectral_entropy(const Spectrum& spec) {
  if (spec.psd.empty()) throw_error(ErrorKind::empty_input, "empty spectrum");
  double total = 0.0;
  for (double p : spec.psd) total += p;
  if (total <= 0.0) {
    throw_error(ErrorKind::undefined_input, "zero total spectral power");
  }
  double entropy = 0.0;
  for (double p : spec.psd) {
    if (p <= 0.0) continue;
    const double q = p / total;
    entropy -= q * std::log2(q);
  }
  return entropy;
}

double band_power(const Spectrum& spec, double lo_hz, double hi_hz) {
  if (!(lo_hz >= 0.0) || !(lo_hz < hi_hz)) {
    throw_error(ErrorKind::invalid_argument,
                "band edges must satisfy 0 <= lo < hi");
  }
  double power = 0.0;
  for (std::size_t k = 0; k < spec.psd.size(); ++k) {
    const double f = spec.freqs_hz[k];
    if (f >= lo_hz && f < hi_hz) power += spec.psd[k];
  }
  return power;
}

namespace {

const std::unordered_set<std::string>& known_kinds() {
  static const std::unordered_set<std::string> kinds = {
      "latency",          "abs_amplitude",      "positive_area",
      "max_peak_ratio",   "signal_energy",      "histogram_entropy",
      "zero_crossing_rate", "interval_mean",    "interval_sd",
      "interval_skewness", "spectral_flatness", "spectral_rolloff",
      "spectral_deformation", "spectral_width", "spectral_centroid",
      "spectral_entropy", "band_power"};
  return kinds;
}

bool kind_needs_window(const std::string& kind) {
  return kind == "latency" || kind == "positive_area" ||
         kind == "max_peak_ratio";
}

double param_or(const FeatureDescriptor& d, const std::string& key,
                double fallback) {
  const auto it = d.params.find(key);
  return it == d.params.end() ? fallback : it->second;
}

double require_param(const FeatureDescriptor& d, const std::string& key) {
  const auto it = d.params.find(key);
  if (it == d.params.end()) {
    throw_error(ErrorKind::config,
                "descriptor '" + d.name + "' needs parameter '" + key + "'");
  }
  return it->second;
}

// Lazily computed per-channel/part products shared between descriptors.
struct PartState {
  const std::vector<double>* seq = nullptr;
  std::optional<Spectrum> spectrum;
  std::optional<IntervalStats> intervals;
  bool intervals_undefined = false;
};

const Spectrum& cached_spectrum(PartState& st, double rate_hz) {
  if (!st.spectrum) st.spectrum = periodogram(*st.seq, rate_hz);
  return *st.spectrum;
}

const IntervalStats& cached_intervals(PartState& st) {
  if (st.intervals_undefined) {
    throw_error(ErrorKind::insufficient_structure,
                "fewer than three intervals between derivative sign changes");
  }
  if (!st.intervals) {
    try {
      st.intervals = derivative_interval_stats(*st.seq);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::insufficient_structure) {
        st.intervals_undefined = true;
      }
      throw;
    }
  }
  return *st.intervals;
}

const TimeWindow& require_window(const FeatureDescriptor& d) {
  if (!d.window) {
    throw_error(ErrorKind::config,
                "descriptor '" + d.name + "' needs a time window");
  }
  return *d.window;
}

double evaluate(const FeatureDescriptor& d, PartState& st,
                const SamplingMeta& meta) {
  const std::vector<double>& seq = *st.seq;
  if (d.kind == "latency") return latency(seq, meta, require_window(d));
  if (d.kind == "abs_amplitude") return abs_amplitude(seq);
  if (d.kind == "positive_area") {
    return positive_area(seq, meta, require_window(d));
  }
  if (d.kind == "max_peak_ratio") {
    return max_peak_ratio(seq, meta, require_window(d));
  }
  if (d.kind == "signal_energy") return signal_energy(seq);
  if (d.kind == "histogram_entropy") {
    const double bins = param_or(d, "bins", 16.0);
    return histogram_entropy(seq, static_cast<std::size_t>(bins));
  }
  if (d.kind == "zero_crossing_rate") return zero_crossing_rate(seq);
  if (d.kind == "interval_mean") return cached_intervals(st).mean;
  if (d.kind == "interval_sd") return cached_intervals(st).sd;
  if (d.kind == "interval_skewness") return cached_intervals(st).skewness;
  const Spectrum& spec = cached_spectrum(st, meta.rate_hz);
  if (d.kind == "spectral_flatness") return spectral_flatness(spec);
  if (d.kind == "spectral_rolloff") {
    return spectral_rolloff(spec, param_or(d, "fraction", 0.7));
  }
  if (d.kind == "spectral_deformation") {
    return spectral_deformation_width(spec).deformation;
  }
  if (d.kind == "spectral_width") {
    return spectral_deformation_width(spec).width;
  }
  if (d.kind == "spectral_centroid") return spectral_centroid(spec);
  if (d.kind == "spectral_entropy") return spectral_entropy(spec);
  if (d.kind == "band_power") {
    return band_power(spec, require_param(d, "lo_hz"),
                      require_param(d, "hi_hz"));
  }
  throw_error(ErrorKind::config, "unknown feature kind: " + d.kind);
}

}  // namespace

void validate_registry(const FeatureRegistry& registry) {
  if (registry.empty()) {
    throw_error(ErrorKind::config, "feature registry is empty");
  }
  std::unordered_set<std::string> names;
  for (const FeatureDescriptor& d : registry) {
    if (!names.insert(d.name).second) {
      throw_error(ErrorKind::config,
                  "duplicate feature name in registry: " + d.name);
    }
    if (known_kinds().count(d.kind) == 0) {
      throw_error(ErrorKind::config, "unknown feature kind: " + d.kind);
    }
    if (kind_needs_window(d.kind) && !d.window) {
      throw_error(ErrorKind::config,
                  "descriptor '" + d.name + "' needs a time window");
    }
    if (d.window && !(d.window->start_ms < d.window->end_ms)) {
      throw_error(ErrorKind::config,
                  "descriptor '" + d.name + "' has an empty time window");
    }
    if (d.kind == "band_power") {
      const double lo = require_param(d, "lo_hz");
      const double hi = require_param(d, "hi_hz");
      if (!(lo >= 0.0) || !(lo < hi)) {
        throw_error(ErrorKind::config,
                    "descriptor '" + d.name + "' has invalid band edges");
      }
    }
    if (d.kind == "histogram_entropy" && param_or(d, "bins", 16.0) < 1.0) {
      throw_error(ErrorKind::config,
                  "descriptor '" + d.name + "' needs at least one bin");
    }
    if (d.kind == "spectral_rolloff") {
      const double fraction = param_or(d, "fraction", 0.7);
      if (!(fraction > 0.0) || !(fraction < 1.0)) {
        throw_error(ErrorKind::config,
                    "descriptor '" + d.name + "' has invalid rolloff fraction");
      }
    }
  }
}

const FeatureRegistry& default_registry() {
  static const FeatureRegistry registry = [] {
    const TimeWindow early{100.0, 200.0};
    const TimeWindow late{200.0, 400.0};
    FeatureRegistry r;
    auto add = [&r](std::string name, std::string kind, SignalPart part,
                    std::optional<TimeWindow> window,
                    std::map<std::string, double> params) {
      r.push_back({std::move(name), std::move(kind), part, window,
                   std::move(params)});
    };
    add("latency_100_200", "latency", SignalPart::lp, early, {});
    add("latency_200_400", "latency", SignalPart::lp, late, {});
    add("abs_amplitude", "abs_amplitude", SignalPart::lp, {}, {});
    add("positive_area_100_200", "positive_area", SignalPart::lp, early, {});
    add("positive_area_200_400", "positive_area", SignalPart::lp, late, {});
    add("peak_time_ratio_100_200", "max_peak_ratio", SignalPart::lp, early,
        {});
    add("peak_time_ratio_200_400", "max_peak_ratio", SignalPart::lp, late, {});
    add("signal_energy", "signal_energy", SignalPart::lp, {}, {});
    add("histogram_entropy", "histogram_entropy", SignalPart::lp, {},
        {{"bins", 16.0}});
    add("zero_crossing_rate", "zero_crossing_rate", SignalPart::hp, {}, {});
    add("interval_mean", "interval_mean", SignalPart::hp, {}, {});
    add("interval_sd", "interval_sd", SignalPart::hp, {}, {});
    add("interval_skewness", "interval_skewness", SignalPart::hp, {}, {});
    add("spectral_flatness", "spectral_flatness", SignalPart::hp, {}, {});
    add("spectral_rolloff", "spectral_rolloff", SignalPart::hp, {},
        {{"fraction", 0.7}});
    add("spectral_deformation", "spectral_deformation", SignalPart::hp, {},
        {});
    add("spectral_width", "spectral_width", SignalPart::hp, {}, {});
    add("spectral_centroid", "spectral_centroid", SignalPart::hp, {}, {});
    add("spectral_entropy", "spectral_entropy", SignalPart::hp, {}, {});
    add("band_power_delta", "band_power", SignalPart::full, {},
        {{"lo_hz", 0.5}, {"hi_hz", 4.0}});
    add("band_power_theta", "band_power", SignalPart::full, {},
        {{"lo_hz", 4.0}, {"hi_hz", 8.0}});
    add("band_power_alpha", "band_power", SignalPart::full, {},
        {{"lo_hz", 8.0}, {"hi_hz", 13.0}});
    add("band_power_beta", "band_power", SignalPart::full, {},
        {{"lo_hz", 13.0}, {"hi_hz", 20.0}});
    add("hp_band_20_40", "band_power", SignalPart::hp, {},
        {{"lo_hz", 20.0}, {"hi_hz", 40.0}});
    add("hp_band_40_60", "band_power", SignalPart::hp, {},
        {{"lo_hz", 40.0}, {"hi_hz", 60.0}});
    add("hp_band_60_80", "band_power", SignalPart::hp, {},
        {{"lo_hz", 60.0}, {"hi_hz", 80.0}});
    add("hp_band_80_100", "band_power", SignalPart::hp, {},
        {{"lo_hz", 80.0}, {"hi_hz", 100.0}});
    return r;
  }();
  return registry;
}

FeatureVector extract_feature_vector(const std::vector<LpHp>& parts,
                                     const std::vector<std::string>& channels,
                                     const SamplingMeta& meta,
                                     const FeatureRegistry& registry) {
  if (channels.empty()) {
    throw_error(ErrorKind::empty_input, "no channels to extract from");
  }
  if (parts.size() != channels.size()) {
    throw_error(ErrorKind::shape,
                "split count does not match channel count");
  }
  validate_registry(registry);
  meta.validate();

  FeatureVector out;
  out.values.reserve(channels.size() * registry.size());
  out.layout.reserve(channels.size() * registry.size());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const std::vector<double>& lp = parts[c].lp;
    const std::vector<double>& hp = parts[c].hp;
    if (lp.size() != hp.size()) {
      throw_error(ErrorKind::shape, "lp/hp length mismatch");
    }
    std::vector<double> full(lp.size());
    for (std::size_t i = 0; i < lp.size(); ++i) full[i] = lp[i] + hp[i];

    PartState states[3];
    states[0].seq = &lp;
    states[1].seq = &hp;
    states[2].seq = &full;

    for (const FeatureDescriptor& d : registry) {
      PartState& st = states[static_cast<int>(d.part)];
      double value;
      try {
        value = evaluate(d, st, meta);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::insufficient_structure ||
            e.kind() == ErrorKind::undefined_input) {
          value = kNaN;  // missing-value sentinel, imputed downstream
        } else {
          throw;
        }
      }
      out.values.push_back(value);
      out.layout.push_back({channels[c], d.name});
    }
  }
  return out;
}

}  // namespace erp
