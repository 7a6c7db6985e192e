#include "erp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "erp/errors.hpp"
#include "erp/fft.hpp"
#include "erp/rng.hpp"
#include "erp/roi.hpp"

namespace erp {

namespace {

void validate_component(const ComponentParams& p, const SamplingMeta& meta,
                        const char* name) {
  if (!(p.latency_mean_ms > 0.0) ||
      p.latency_mean_ms >= meta.post_stimulus_ms()) {
    throw_error(ErrorKind::invalid_argument,
                std::string(name) +
                    " latency must lie inside the post-stimulus span");
  }
  if (p.latency_sd_ms < 0.0 || p.amplitude_sd_uv < 0.0) {
    throw_error(ErrorKind::invalid_argument,
                std::string(name) + " standard deviations must be >= 0");
  }
  if (!(p.width_ms > 0.0)) {
    throw_error(ErrorKind::invalid_argument,
                std::string(name) + " width must be positive");
  }
}

void validate_class(const ClassParams& c, const SamplingMeta& meta,
                    const char* name) {
  validate_component(c.p150, meta, name);
  validate_component(c.p300, meta, name);
  for (const BandNoise& band : c.noise_bands) {
    if (!(band.lo_hz >= 0.0) || !(band.lo_hz < band.hi_hz) ||
        band.hi_hz > meta.rate_hz / 2.0) {
      throw_error(ErrorKind::invalid_argument,
                  std::string(name) + " noise band edges are invalid");
    }
    if (band.amplitude_uv < 0.0) {
      throw_error(ErrorKind::invalid_argument,
                  std::string(name) + " noise band amplitude must be >= 0");
    }
  }
}

// Frequency profile of one channel's continuous background noise:
// per-bin standard deviation of the complex spectral draw, combining the
// pink component and any flat bands, each scaled so that alone it would
// reach its target time-domain RMS.
std::vector<double> noise_profile(std::size_t n_fft, double rate_hz,
                                  double pink_uv,
                                  const std::vector<BandNoise>& bands) {
  const std::size_t half = n_fft / 2;
  auto scale_for = [n_fft, half](const std::vector<double>& shape,
                                 double target_rms) {
    double sum = 0.0;
    for (std::size_t k = 1; k < half; ++k) sum += 4.0 * shape[k] * shape[k];
    sum += shape[half] * shape[half];
    if (sum <= 0.0 || target_rms <= 0.0) return 0.0;
    return target_rms * static_cast<double>(n_fft) / std::sqrt(sum);
  };

  std::vector<double> variance(half + 1, 0.0);
  {
    std::vector<double> shape(half + 1, 0.0);
    for (std::size_t k = 1; k <= half; ++k) {
      const double f =
          static_cast<double>(k) * rate_hz / static_cast<double>(n_fft);
      shape[k] = 1.0 / std::sqrt(std::max(f, 1.0));
    }
    const double s = scale_for(shape, pink_uv);
    for (std::size_t k = 1; k <= half; ++k) {
      variance[k] += s * s * shape[k] * shape[k];
    }
  }
  for (const BandNoise& band : bands) {
    std::vector<double> shape(half + 1, 0.0);
    for (std::size_t k = 1; k <= half; ++k) {
      const double f =
          static_cast<double>(k) * rate_hz / static_cast<double>(n_fft);
      if (f >= band.lo_hz && f < band.hi_hz) shape[k] = 1.0;
    }
    const double s = scale_for(shape, band.amplitude_uv);
    for (std::size_t k = 1; k <= half; ++k) {
      variance[k] += s * s * shape[k] * shape[k];
    }
  }
  std::vector<double> sigma(half + 1, 0.0);
  for (std::size_t k = 1; k <= half; ++k) sigma[k] = std::sqrt(variance[k]);
  return sigma;
}

// Draws a length-n real noise signal by sampling a Hermitian spectrum of
// the given per-bin standard deviations over n_fft >= n points.
std::vector<double> draw_noise(Rng& rng, std::size_t n, std::size_t n_fft,
                               const std::vector<double>& sigma) {
  const std::size_t half = n_fft / 2;
  std::vector<cplx> spectrum(n_fft, cplx{0.0, 0.0});
  for (std::size_t k = 1; k < half; ++k) {
    const cplx c{rng.normal() * sigma[k], rng.normal() * sigma[k]};
    spectrum[k] = c;
    spectrum[n_fft - k] = std::conj(c);
  }
  spectrum[half] = cplx{rng.normal() * sigma[half], 0.0};
  const std::vector<cplx> time = ifft(std::move(spectrum));
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = time[t].real();
  return out;
}

void add_bump(std::vector<double>& x, double rate_hz, double center_sample,
              double amplitude_uv, double width_ms) {
  const double width_samples = width_ms * rate_hz / 1000.0;
  const double span = 4.0 * width_samples;
  const auto lo = static_cast<long>(std::ceil(center_sample - span));
  const auto hi = static_cast<long>(std::floor(center_sample + span));
  const long last = static_cast<long>(x.size()) - 1;
  for (long s = std::max(lo, 0L); s <= std::min(hi, last); ++s) {
    const double d = (static_cast<double>(s) - center_sample) / width_samples;
    x[static_cast<std::size_t>(s)] += amplitude_uv * std::exp(-0.5 * d * d);
  }
}

struct SubjectDraw {
  double p150_latency_ms = 0.0;
  double p150_amplitude_uv = 0.0;
  double p300_latency_ms = 0.0;
  double p300_amplitude_uv = 0.0;
};

SubjectDraw draw_components(Rng& rng, const ClassParams& params) {
  SubjectDraw d;
  d.p150_latency_ms =
      params.p150.latency_mean_ms + rng.normal() * params.p150.latency_sd_ms;
  d.p150_amplitude_uv = params.p150.amplitude_mean_uv +
                        rng.normal() * params.p150.amplitude_sd_uv;
  d.p300_latency_ms =
      params.p300.latency_mean_ms + rng.normal() * params.p300.latency_sd_ms;
  d.p300_amplitude_uv = params.p300.amplitude_mean_uv +
                        rng.normal() * params.p300.amplitude_sd_uv;
  return d;
}

}  // namespace

void SynthConfig::validate() const {
  meta.validate();
  if (n_subjects_per_class == 0) {
    throw_error(ErrorKind::invalid_argument,
                "need at least one subject per class");
  }
  if (trials_per_subject == 0) {
    throw_error(ErrorKind::invalid_argument, "need at least one trial");
  }
  if (inter_stimulus_samples == 0) {
    throw_error(ErrorKind::invalid_argument,
                "inter-stimulus gap must be positive");
  }
  validate_class(regular, meta, "regular class");
  validate_class(dyslexic, meta, "dyslexic class");
  if (pink_noise_uv < 0.0 || trial_jitter_sd_ms < 0.0) {
    throw_error(ErrorKind::invalid_argument,
                "noise amplitudes must be >= 0");
  }
  if (behavioral_error_rate < 0.0 || behavioral_error_rate > 1.0) {
    throw_error(ErrorKind::invalid_argument,
                "behavioral error rate must lie in [0, 1]");
  }
}

std::vector<SynthSubject> generate_dataset(const SynthConfig& cfg) {
  cfg.validate();
  const std::vector<std::string> electrodes =
      cfg.electrodes.empty() ? ElectrodeLayout::standard_64().labels()
                             : cfg.electrodes;
  const std::unordered_set<std::string> electrode_set(electrodes.begin(),
                                                      electrodes.end());
  std::unordered_set<std::string> masked;
  for (const std::string& label : cfg.effect_mask) {
    if (electrode_set.count(label) == 0) {
      throw_error(ErrorKind::invalid_argument,
                  "effect mask names an absent electrode: " + label);
    }
    masked.insert(label);
  }

  const SamplingMeta& meta = cfg.meta;
  const std::size_t n_rec =
      2 * cfg.margin_samples + meta.pre_stimulus_samples +
      (cfg.trials_per_subject - 1) * cfg.inter_stimulus_samples +
      meta.post_stimulus_samples;
  const std::size_t n_fft = next_pow2(std::max<std::size_t>(n_rec, 2));

  std::vector<SynthSubject> out;
  const std::size_t total = 2 * cfg.n_subjects_per_class;
  out.reserve(total);
  for (std::size_t subject = 0; subject < total; ++subject) {
    const bool is_dyslexic = subject >= cfg.n_subjects_per_class;
    const ClassParams& own_class = is_dyslexic ? cfg.dyslexic : cfg.regular;
    SynthSubject s;
    s.label = is_dyslexic ? ClassLabel::dyslexic : ClassLabel::regular;
    {
      char id[32];
      std::snprintf(id, sizeof id, "%s_%02zu", to_string(s.label),
                    subject % cfg.n_subjects_per_class + 1);
      s.subject_id = id;
    }

    Rng rng(derive_seed(cfg.seed, subject));
    // Baseline parameters (shared regular-class distribution) drive the
    // unmasked electrodes of both classes; the subject's own class
    // distribution drives the masked electrodes.
    const SubjectDraw baseline = draw_components(rng, cfg.regular);
    const SubjectDraw effect = draw_components(rng, own_class);

    std::vector<double> jitter_ms(cfg.trials_per_subject);
    std::vector<bool> correct(cfg.trials_per_subject);
    for (std::size_t t = 0; t < cfg.trials_per_subject; ++t) {
      jitter_ms[t] = rng.normal() * cfg.trial_jitter_sd_ms;
      correct[t] = rng.uniform() >= cfg.behavioral_error_rate;
    }

    ContinuousRecording& rec = s.recording;
    rec.rate_hz = meta.rate_hz;
    rec.channels = electrodes;
    rec.samples.reserve(electrodes.size());
    rec.events.reserve(cfg.trials_per_subject);
    for (std::size_t t = 0; t < cfg.trials_per_subject; ++t) {
      StimulusEvent ev;
      ev.sample_index = cfg.margin_samples + meta.pre_stimulus_samples +
                        t * cfg.inter_stimulus_samples;
      ev.condition = "target";
      ev.behavioral_correct = correct[t];
      rec.events.push_back(ev);
    }

    for (const std::string& electrode : electrodes) {
      const bool carries_effect = masked.count(electrode) > 0;
      const SubjectDraw& draw = carries_effect ? effect : baseline;
      const ClassParams& params = carries_effect ? own_class : cfg.regular;

      const std::vector<double> sigma = noise_profile(
          n_fft, meta.rate_hz, cfg.pink_noise_uv, params.noise_bands);
      std::vector<double> channel = draw_noise(rng, n_rec, n_fft, sigma);

      for (std::size_t t = 0; t < cfg.trials_per_subject; ++t) {
        const double event_sample =
            static_cast<double>(rec.events[t].sample_index);
        const double to_samples = meta.rate_hz / 1000.0;
        add_bump(channel, meta.rate_hz,
                 event_sample + (draw.p150_latency_ms + jitter_ms[t]) *
                                    to_samples,
                 draw.p150_amplitude_uv, params.p150.width_ms);
        add_bump(channel, meta.rate_hz,
                 event_sample + (draw.p300_latency_ms + jitter_ms[t]) *
                                    to_samples,
                 draw.p300_amplitude_uv, params.p300.width_ms);
      }
      rec.samples.push_back(std::move(channel));
    }
    rec.validate();
    out.push_back(std::move(s));
  }
  return out;
}

SynthConfig default_dyslexia_scenario() {
  SynthConfig cfg;
  cfg.n_subjects_per_class = 16;
  cfg.trials_per_subject = 40;

  cfg.regular.p150 = {150.0, 10.0, 5.0, 0.8, 25.0};
  cfg.regular.p300 = {300.0, 15.0, 10.0, 1.0, 50.0};
  cfg.regular.noise_bands = {{20.0, 60.0, 1.0}};

  cfg.dyslexic.p150 = cfg.regular.p150;
  cfg.dyslexic.p300 = {380.0, 15.0, 6.0, 1.0, 50.0};
  cfg.dyslexic.noise_bands = {{20.0, 60.0, 3.0}};

  const ElectrodeLayout& layout = ElectrodeLayout::standard_64();
  for (const ElectrodeSite& site : layout.sites) {
    if (site.hemisphere == Hemisphere::left &&
        (site.region == Region::anterior ||
         site.region == Region::posterior)) {
      cfg.effect_mask.push_back(site.label);
    }
  }
  return cfg;
}

SynthConfig hp_only_scenario() {
  SynthConfig cfg = default_dyslexia_scenario();
  cfg.dyslexic.p150 = cfg.regular.p150;
  cfg.dyslexic.p300 = cfg.regular.p300;
  cfg.regular.noise_bands = {{8.0, 18.0, 1.0}};
  cfg.dyslexic.noise_bands = {{8.0, 18.0, 3.0}};
  return cfg;
}

SynthConfig scenario_by_name(const std::string& name) {
  if (name == "default") return default_dyslexia_scenario();
  if (name == "hp_only") return hp_only_scenario();
  throw_error(ErrorKind::config, "unknown scenario: " + name);
}

}  // namespace erp
