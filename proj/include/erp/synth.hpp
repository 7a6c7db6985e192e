#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "erp/types.hpp"

namespace erp {

// Gaussian-bump evoked component. Subject-level latency and amplitude are
// drawn once per subject from these distributions.
struct ComponentParams {
  double latency_mean_ms = 0.0;
  double latency_sd_ms = 0.0;
  double amplitude_mean_uv = 0.0;
  double amplitude_sd_uv = 0.0;
  double width_ms = 40.0;
};

// Band-limited Gaussian noise with a flat spectrum inside [lo, hi] and the
// given time-domain RMS amplitude.
struct BandNoise {
  double lo_hz = 0.0;
  double hi_hz = 0.0;
  double amplitude_uv = 0.0;
};

struct ClassParams {
  ComponentParams p150;
  ComponentParams p300;
  std::vector<BandNoise> noise_bands;
};

struct SynthConfig {
  std::size_t n_subjects_per_class = 16;
  std::size_t trials_per_subject = 40;
  SamplingMeta meta;
  ClassParams regular;
  ClassParams dyslexic;
  // Electrodes carrying the class difference; everywhere else both
  // classes generate from the `regular` parameters.
  std::vector<std::string> effect_mask;
  std::vector<std::string> electrodes;  // defaults to the 64-channel montage
  double pink_noise_uv = 4.0;
  double trial_jitter_sd_ms = 15.0;
  double behavioral_error_rate = 0.05;
  std::size_t inter_stimulus_samples = 512;
  std::size_t margin_samples = 256;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthSubject {
  std::string subject_id;
  ClassLabel label = ClassLabel::unknown;
  ContinuousRecording recording;
};

// Deterministic per (config, seed): each subject uses a seed derived from
// (config seed, subject index), so outputs do not depend on generation
// order.
std::vector<SynthSubject> generate_dataset(const SynthConfig& cfg);

// Benchmark scenario: regular P300 at 300 ms / 10 uV, dyslexic at
// 380 ms / 6 uV with elevated 20-60 Hz noise power, differences confined
// to left anterior + left posterior electrodes, 16 subjects per class,
// 40 trials each.
SynthConfig default_dyslexia_scenario();

// Variant whose only class difference is band-limited noise power (8-18 Hz,
// inside the analysis passband); evoked components are identical across
// classes.
SynthConfig hp_only_scenario();

SynthConfig scenario_by_name(const std::string& name);

}  // namespace erp
