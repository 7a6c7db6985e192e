#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace erp {

enum class ClassLabel { unknown, regular, dyslexic };

const char* to_string(ClassLabel label);
ClassLabel class_label_from_string(const std::string& s);

// Epoch geometry around the stimulus: pre_stimulus_samples before t=0,
// post_stimulus_samples from t=0 on. Sample index pre_stimulus_samples is
// the stimulus onset.
struct SamplingMeta {
  double rate_hz = 256.0;
  std::size_t pre_stimulus_samples = 64;
  std::size_t post_stimulus_samples = 384;

  std::size_t epoch_samples() const {
    return pre_stimulus_samples + post_stimulus_samples;
  }
  double ms_at(std::size_t sample_index) const {
    return (static_cast<double>(sample_index) -
            static_cast<double>(pre_stimulus_samples)) *
           1000.0 / rate_hz;
  }
  double post_stimulus_ms() const {
    return static_cast<double>(post_stimulus_samples) * 1000.0 / rate_hz;
  }
  bool operator==(const SamplingMeta&) const = default;

  void validate() const;  // throws Error on violated invariants
};

struct StimulusEvent {
  std::size_t sample_index = 0;
  std::string condition;
  bool behavioral_correct = true;
};

// Raw multichannel record with stimulus markers. samples[c] is channel c
// in microvolts; all channels share one length.
struct ContinuousRecording {
  std::vector<std::string> channels;
  std::vector<std::vector<double>> samples;
  double rate_hz = 0.0;
  std::vector<StimulusEvent> events;

  std::size_t n_samples() const { return samples.empty() ? 0 : samples[0].size(); }
  void validate() const;
};

// One trial window, channels x epoch_samples.
struct Epoch {
  std::vector<std::string> channels;
  std::vector<std::vector<double>> channel_values;
  SamplingMeta meta;
  std::string condition;
  bool behavioral_correct = true;

  void validate() const;
};

// Trial-averaged waveform for one subject.
struct ErpAverage {
  std::vector<std::string> channels;
  std::vector<std::vector<double>> channel_values;
  SamplingMeta meta;
  std::size_t n_trials = 0;
  std::string subject_id;
  ClassLabel class_label = ClassLabel::unknown;
};

}  // namespace erp
