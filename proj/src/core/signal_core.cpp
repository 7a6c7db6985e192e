#include "erp/signal_core.hpp"

#include <algorithm>
#include <cmath>

#include "erp/errors.hpp"
#include "erp/fft.hpp"

namespace erp {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

// Hamming-windowed sinc lowpass with unit DC gain, odd length.
std::vector<double> windowed_sinc_lowpass(double cutoff_norm, std::size_t taps) {
  std::vector<double> h(taps);
  const double mid = static_cast<double>(taps - 1) / 2.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < taps; ++n) {
    const double t = static_cast<double>(n) - mid;
    const double w =
        0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(n) /
                               static_cast<double>(taps - 1));
    h[n] = 2.0 * cutoff_norm * sinc(2.0 * cutoff_norm * t) * w;
    sum += h[n];
  }
  for (auto& v : h) v /= sum;
  return h;
}

std::size_t taps_for_transition(double transition_norm) {
  // Hamming main-lobe width ~ 3.3 / taps (normalized frequency).
  std::size_t taps = static_cast<std::size_t>(std::ceil(3.3 / transition_norm));
  if (taps < 9) taps = 9;
  if (taps % 2 == 0) ++taps;
  return taps;
}

std::vector<double> reflect_pad(const std::vector<double>& x, std::size_t pad) {
  // Half-point reflection; folds if pad exceeds the signal length.
  const long long n = static_cast<long long>(x.size());
  std::vector<double> out(x.size() + 2 * pad);
  for (long long i = 0; i < static_cast<long long>(out.size()); ++i) {
    long long idx = i - static_cast<long long>(pad);
    while (idx < 0 || idx >= n) {
      if (idx < 0) idx = -idx - 1;
      if (idx >= n) idx = 2 * n - idx - 1;
    }
    out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(idx)];
  }
  return out;
}

}  // namespace

ZeroPhaseFir::ZeroPhaseFir(double rate_hz, double lo_hz, double hi_hz,
                           double transition_hz)
    : rate_hz_(rate_hz) {
  if (!(rate_hz > 0.0))
    throw_error(ErrorKind::invalid_argument, "filter: rate_hz must be > 0");
  if (!(lo_hz >= 0.0) || !(hi_hz > lo_hz) || !(hi_hz < rate_hz / 2.0))
    throw_error(ErrorKind::invalid_argument,
                "filter: need 0 <= lo_hz < hi_hz < rate_hz/2");

  double tw = transition_hz;
  if (tw <= 0.0) {
    double tw_hi = std::min(std::max(0.25 * hi_hz, 2.0), rate_hz / 2.0 - hi_hz);
    tw = tw_hi;
    if (lo_hz > 0.0) {
      double tw_lo = std::min(std::max(0.25 * lo_hz, 0.1), lo_hz);
      tw = std::min(tw, tw_lo);
    }
  }

  const std::size_t taps = taps_for_transition(tw / rate_hz);
  kernel_ = windowed_sinc_lowpass(hi_hz / rate_hz, taps);
  if (lo_hz > 0.0) {
    auto lp_lo = windowed_sinc_lowpass(lo_hz / rate_hz, taps);
    for (std::size_t i = 0; i < taps; ++i) kernel_[i] -= lp_lo[i];
  }

  // Autocorrelation = combined forward+backward response.
  pass_kernel_.assign(2 * taps - 1, 0.0);
  for (std::size_t i = 0; i < taps; ++i)
    for (std::size_t j = 0; j < taps; ++j)
      pass_kernel_[i + (taps - 1 - j)] += kernel_[i] * kernel_[j];
}

std::vector<double> ZeroPhaseFir::apply(const std::vector<double>& x) const {
  const std::size_t taps = kernel_.size();
  if (x.size() <= taps)
    throw_error(ErrorKind::length,
                "filter: signal length " + std::to_string(x.size()) +
                    " must exceed filter length " + std::to_string(taps));

  const std::size_t pad = taps - 1;
  std::vector<double> padded = reflect_pad(x, pad);

  // FFT convolution with the two-pass kernel; "same" crop at the kernel
  // center, then strip the padding.
  const std::size_t conv_len = padded.size() + pass_kernel_.size() - 1;
  const std::size_t m = next_pow2(conv_len);

  if (cached_fft_size_ != m) {
    std::vector<cplx> k(m, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < pass_kernel_.size(); ++i) k[i] = pass_kernel_[i];
    k = fft(std::move(k));
    cached_spectrum_re_.resize(m);
    cached_spectrum_im_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      cached_spectrum_re_[i] = k[i].real();
      cached_spectrum_im_[i] = k[i].imag();
    }
    cached_fft_size_ = m;
  }

  std::vector<cplx> a(m, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < padded.size(); ++i) a[i] = padded[i];
  a = fft(std::move(a));
  for (std::size_t i = 0; i < m; ++i)
    a[i] *= cplx(cached_spectrum_re_[i], cached_spectrum_im_[i]);
  a = ifft(std::move(a));

  const std::size_t center = pass_kernel_.size() / 2;  // == taps - 1
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = a[i + pad + center].real();
  return out;
}

std::vector<double> bandpass_filter(const std::vector<double>& signal,
                                    double rate_hz, double lo_hz, double hi_hz) {
  ZeroPhaseFir fir(rate_hz, lo_hz, hi_hz);
  return fir.apply(signal);
}

DecimateResult decimate(const std::vector<double>& signal, double rate_hz,
                        std::size_t factor) {
  if (factor == 0)
    throw_error(ErrorKind::invalid_argument, "decimate: factor must be >= 1");
  if (!(rate_hz > 0.0))
    throw_error(ErrorKind::invalid_argument, "decimate: rate_hz must be > 0");
  if (signal.empty())
    throw_error(ErrorKind::empty_input, "decimate: empty signal");

  DecimateResult out;
  out.rate_hz = rate_hz / static_cast<double>(factor);
  if (factor == 1) {
    out.samples = signal;
    return out;
  }

  const double new_nyquist = out.rate_hz / 2.0;
  ZeroPhaseFir antialias(rate_hz, 0.0, 0.4 * new_nyquist, 0.2 * new_nyquist);
  std::vector<double> filtered = antialias.apply(signal);

  const std::size_t n_out = (signal.size() + factor - 1) / factor;
  out.samples.resize(n_out);
  for (std::size_t i = 0; i < n_out; ++i) out.samples[i] = filtered[i * factor];
  return out;
}

SegmentResult segment_epochs(const ContinuousRecording& rec,
                             const SamplingMeta& meta) {
  rec.validate();
  meta.validate();
  const std::size_t n = rec.n_samples();
  const std::size_t pre = meta.pre_stimulus_samples;
  const std::size_t post = meta.post_stimulus_samples;

  SegmentResult result;
  for (std::size_t e = 0; e < rec.events.size(); ++e) {
    const auto& ev = rec.events[e];
    if (ev.sample_index < pre) {
      result.skipped.push_back({e, ev.sample_index, "before recording start"});
      continue;
    }
    if (ev.sample_index + post > n) {
      result.skipped.push_back({e, ev.sample_index, "after recording end"});
      continue;
    }
    Epoch epoch;
    epoch.channels = rec.channels;
    epoch.meta = meta;
    epoch.meta.rate_hz = rec.rate_hz;
    epoch.condition = ev.condition;
    epoch.behavioral_correct = ev.behavioral_correct;
    epoch.channel_values.reserve(rec.samples.size());
    const std::size_t start = ev.sample_index - pre;
    for (const auto& channel : rec.samples) {
      epoch.channel_values.emplace_back(channel.begin() + start,
                                        channel.begin() + start + pre + post);
    }
    result.epochs.push_back(std::move(epoch));
  }
  return result;
}

Epoch baseline_correct(const Epoch& epoch) {
  epoch.validate();
  if (epoch.meta.pre_stimulus_samples == 0)
    throw_error(ErrorKind::invalid_argument,
                "baseline_correct: epoch has no pre-stimulus segment");
  Epoch out = epoch;
  const std::size_t pre = epoch.meta.pre_stimulus_samples;
  for (auto& channel : out.channel_values) {
    double mean = 0.0;
    for (std::size_t i = 0; i < pre; ++i) mean += channel[i];
    mean /= static_cast<double>(pre);
    for (auto& v : channel) v -= mean;
  }
  return out;
}

RejectResult reject_trials(const std::vector<Epoch>& epochs,
                           double amplitude_threshold_uv) {
  if (!(amplitude_threshold_uv > 0.0))
    throw_error(ErrorKind::invalid_argument,
                "reject_trials: threshold must be > 0");
  RejectResult result;
  for (const auto& epoch : epochs) {
    if (!epoch.behavioral_correct) {
      ++result.rejected_by_reason["behavioral"];
      continue;
    }
    bool over = false;
    for (const auto& channel : epoch.channel_values) {
      for (double v : channel) {
        if (std::abs(v) > amplitude_threshold_uv) {
          over = true;
          break;
        }
      }
      if (over) break;
    }
    if (over) {
      ++result.rejected_by_reason["amplitude"];
      continue;
    }
    result.kept.push_back(epoch);
  }
  return result;
}

ErpAverage average_erp(const std::vector<Epoch>& epochs) {
  if (epochs.empty())
    throw_error(ErrorKind::empty_input, "average_erp: no epochs");
  const Epoch& first = epochs.front();
  const std::size_t n_channels = first.channel_values.size();
  const std::size_t n_samples = first.meta.epoch_samples();
  for (const auto& epoch : epochs) {
    if (!(epoch.meta == first.meta) ||
        epoch.channel_values.size() != n_channels ||
        epoch.channels != first.channels)
      throw_error(ErrorKind::shape, "average_erp: epochs disagree on meta/channels");
  }

  ErpAverage avg;
  avg.channels = first.channels;
  avg.meta = first.meta;
  avg.n_trials = epochs.size();
  avg.channel_values.assign(n_channels, std::vector<double>(n_samples, 0.0));
  for (const auto& epoch : epochs)
    for (std::size_t c = 0; c < n_channels; ++c)
      for (std::size_t i = 0; i < n_samples; ++i)
        avg.channel_values[c][i] += epoch.channel_values[c][i];
  const double inv = 1.0 / static_cast<double>(epochs.size());
  for (auto& channel : avg.channel_values)
    for (auto& v : channel) v *= inv;
  return avg;
}

ErpAverage grand_average(const std::vector<ErpAverage>& erps) {
  if (erps.empty())
    throw_error(ErrorKind::empty_input, "grand_average: no subject averages");
  const ErpAverage& first = erps.front();
  const std::size_t n_channels = first.channel_values.size();
  const std::size_t n_samples = first.meta.epoch_samples();

  ErpAverage out;
  out.channels = first.channels;
  out.meta = first.meta;
  out.n_trials = erps.size();
  out.subject_id = "grand";
  out.class_label = first.class_label;
  out.channel_values.assign(n_channels, std::vector<double>(n_samples, 0.0));
  for (const auto& erp : erps) {
    if (!(erp.meta == first.meta) || erp.channels != first.channels)
      throw_error(ErrorKind::shape, "grand_average: subjects disagree on meta/channels");
    if (erp.class_label != out.class_label) out.class_label = ClassLabel::unknown;
    for (std::size_t c = 0; c < n_channels; ++c)
      for (std::size_t i = 0; i < n_samples; ++i)
        out.channel_values[c][i] += erp.channel_values[c][i];
  }
  const double inv = 1.0 / static_cast<double>(erps.size());
  for (auto& channel : out.channel_values)
    for (auto& v : channel) v *= inv;
  return out;
}

}  // namespace erp
