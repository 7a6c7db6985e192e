#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "erp/types.hpp"

namespace erp {

// Zero-phase FIR bandpass/lowpass. The kernel is a Hamming-windowed sinc
// (difference of two lowpass sincs when lo_hz > 0); the forward-backward
// pass of the symmetric kernel collapses to a single convolution with its
// autocorrelation, applied over reflection padding so the output length
// matches the input. Construction cost is paid once; apply() reuses the
// kernel spectrum across signals of equal length.
class ZeroPhaseFir {
 public:
  // transition_hz <= 0 picks a default per edge: 0.25x the edge frequency,
  // clamped to [0.1, edge] at the low edge and to at most the headroom
  // below Nyquist at the high edge.
  ZeroPhaseFir(double rate_hz, double lo_hz, double hi_hz,
               double transition_hz = 0.0);

  std::vector<double> apply(const std::vector<double>& x) const;

  std::size_t taps() const { return kernel_.size(); }
  const std::vector<double>& kernel() const { return kernel_; }

 private:
  double rate_hz_;
  std::vector<double> kernel_;       // single-pass symmetric FIR
  std::vector<double> pass_kernel_;  // kernel autocorrelation (both passes)
  mutable std::vector<double> cached_spectrum_re_, cached_spectrum_im_;
  mutable std::size_t cached_fft_size_ = 0;
};

std::vector<double> bandpass_filter(const std::vector<double>& signal,
                                    double rate_hz, double lo_hz, double hi_hz);

struct DecimateResult {
  std::vector<double> samples;
  double rate_hz = 0.0;
};

// Anti-alias lowpass at 0.4x the new Nyquist, then keep every factor-th
// sample. Output length = ceil(n / factor).
DecimateResult decimate(const std::vector<double>& signal, double rate_hz,
                        std::size_t factor);

struct SegmentSkip {
  std::size_t event_index = 0;   // position in the recording's event list
  std::size_t sample_index = 0;
  std::string reason;
};

struct SegmentResult {
  std::vector<Epoch> epochs;
  std::vector<SegmentSkip> skipped;
};

// One epoch per event, window [event - pre, event + post). Events too close
// to a recording edge are skipped and reported, not fatal.
SegmentResult segment_epochs(const ContinuousRecording& rec,
                             const SamplingMeta& meta);

// Subtract the pre-stimulus mean per channel.
Epoch baseline_correct(const Epoch& epoch);

struct RejectResult {
  std::vector<Epoch> kept;
  std::map<std::string, std::size_t> rejected_by_reason;  // "behavioral", "amplitude"
};

RejectResult reject_trials(const std::vector<Epoch>& epochs,
                           double amplitude_threshold_uv);

ErpAverage average_erp(const std::vector<Epoch>& epochs);

// Unweighted mean across subjects; class label kept only if unanimous.
ErpAverage grand_average(const std::vector<ErpAverage>& erps);

}  // namespace erp
