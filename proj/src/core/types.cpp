#include "erp/types.hpp"

#include "erp/errors.hpp"

namespace erp {

const char* to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::regular: return "regular";
    case ClassLabel::dyslexic: return "dyslexic";
    case ClassLabel::unknown: break;
  }
  return "unknown";
}

ClassLabel class_label_from_string(const std::string& s) {
  if (s == "regular") return ClassLabel::regular;
  if (s == "dyslexic") return ClassLabel::dyslexic;
  if (s == "unknown" || s.empty()) return ClassLabel::unknown;
  throw_error(ErrorKind::config, "unknown class label '" + s + "'");
}

void SamplingMeta::validate() const {
  if (!(rate_hz > 0.0))
    throw_error(ErrorKind::invalid_argument, "SamplingMeta: rate_hz must be > 0");
  if (post_stimulus_samples == 0)
    throw_error(ErrorKind::invalid_argument,
                "SamplingMeta: post_stimulus_samples must be > 0");
}

void ContinuousRecording::validate() const {
  if (!(rate_hz > 0.0))
    throw_error(ErrorKind::invalid_argument, "recording: rate_hz must be > 0");
  if (channels.size() != samples.size())
    throw_error(ErrorKind::shape, "recording: channel label/data count mismatch");
  const std::size_t n = n_samples();
  for (const auto& ch : samples)
    if (ch.size() != n)
      throw_error(ErrorKind::shape, "recording: channels have unequal lengths");
  std::size_t prev = 0;
  bool first = true;
  for (const auto& ev : events) {
    if (!first && ev.sample_index <= prev)
      throw_error(ErrorKind::invalid_argument,
                  "recording: event sample indices must be strictly increasing");
    if (ev.sample_index >= n)
      throw_error(ErrorKind::invalid_argument,
                  "recording: event index beyond recording end");
    prev = ev.sample_index;
    first = false;
  }
}

void Epoch::validate() const {
  meta.validate();
  if (!channels.empty() && channels.size() != channel_values.size())
    throw_error(ErrorKind::shape, "epoch: channel label/data count mismatch");
  for (const auto& ch : channel_values)
    if (ch.size() != meta.epoch_samples())
      throw_error(ErrorKind::shape, "epoch: row width != epoch length");
}

}  // namespace erp
