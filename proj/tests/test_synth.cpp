// Synthetic dataset generator tests.
//
// Oracles: with every random spread set to zero the generator
// must produce the pure sum of its evoked bumps, so peak location and
// height follow from the configured means alone; pink noise must show a
// 1/f power law on a log-log fit; band noise must hit its target RMS and
// stay inside its band; independent variances add in quadrature.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "erp/errors.hpp"
#include "erp/features.hpp"
#include "erp/roi.hpp"
#include "erp/synth.hpp"
#include "erp/types.hpp"

namespace {

using erp::ClassLabel;
using erp::SynthConfig;
using erp::SynthSubject;

// Small, fast configuration: two electrodes, short run.
SynthConfig tiny_config() {
  SynthConfig cfg;
  cfg.n_subjects_per_class = 2;
  cfg.trials_per_subject = 8;
  cfg.electrodes = {"C3", "C4"};
  cfg.regular.p150 = {150.0, 10.0, 5.0, 0.8, 25.0};
  cfg.regular.p300 = {300.0, 15.0, 10.0, 1.0, 50.0};
  cfg.dyslexic = cfg.regular;
  cfg.pink_noise_uv = 2.0;
  cfg.seed = 1234;
  return cfg;
}

// All spreads zero: the recording becomes a deterministic sum of bumps.
SynthConfig noiseless_config() {
  SynthConfig cfg = tiny_config();
  cfg.regular.p150 = {150.0, 0.0, 5.0, 0.0, 25.0};
  cfg.regular.p300 = {300.0, 0.0, 10.0, 0.0, 50.0};
  cfg.dyslexic = cfg.regular;
  cfg.pink_noise_uv = 0.0;
  cfg.trial_jitter_sd_ms = 0.0;
  cfg.behavioral_error_rate = 0.0;
  return cfg;
}

double rms(const std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return std::sqrt(sum / static_cast<double>(x.size()));
}

// Least-squares slope of log10(psd) against log10(f), with the psd
// averaged inside logarithmically spaced frequency bins to tame the
// per-bin scatter of a raw periodogram.
double log_log_slope(const erp::Spectrum& spec, double f_lo, double f_hi,
                     std::size_t n_bins) {
  std::vector<double> xs;
  std::vector<double> ys;
  const double step = std::log10(f_hi / f_lo) / static_cast<double>(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double lo = f_lo * std::pow(10.0, step * static_cast<double>(b));
    const double hi = lo * std::pow(10.0, step);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < spec.freqs_hz.size(); ++k) {
      if (spec.freqs_hz[k] >= lo && spec.freqs_hz[k] < hi) {
        sum += spec.psd[k];
        ++count;
      }
    }
    if (count == 0) continue;
    xs.push_back(std::log10(std::sqrt(lo * hi)));
    ys.push_back(std::log10(sum / static_cast<double>(count)));
  }
  REQUIRE(xs.size() >= 5);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

// Mean PSD over [lo, hi).
double band_mean_psd(const erp::Spectrum& spec, double lo, double hi) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < spec.freqs_hz.size(); ++k) {
    if (spec.freqs_hz[k] >= lo && spec.freqs_hz[k] < hi) {
      sum += spec.psd[k];
      ++count;
    }
  }
  REQUIRE(count > 0);
  return sum / static_cast<double>(count);
}

// One long noise-only channel (no evoked bumps, one subject suffices).
std::vector<double> noise_only_channel(double pink_uv,
                                       std::vector<erp::BandNoise> bands,
                                       std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n_subjects_per_class = 1;
  cfg.trials_per_subject = 40;
  cfg.electrodes = {"Cz"};
  cfg.regular.p150 = {150.0, 0.0, 0.0, 0.0, 25.0};
  cfg.regular.p300 = {300.0, 0.0, 0.0, 0.0, 50.0};
  cfg.regular.noise_bands = std::move(bands);
  cfg.dyslexic = cfg.regular;
  cfg.pink_noise_uv = pink_uv;
  cfg.trial_jitter_sd_ms = 0.0;
  cfg.behavioral_error_rate = 0.0;
  cfg.seed = seed;
  const auto subjects = erp::generate_dataset(cfg);
  return subjects[0].recording.samples[0];
}

}  // namespace

TEST_CASE("generation is deterministic per seed") {
  const SynthConfig cfg = tiny_config();
  const auto a = erp::generate_dataset(cfg);
  const auto b = erp::generate_dataset(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].subject_id == b[i].subject_id);
    CHECK(a[i].label == b[i].label);
    CHECK(a[i].recording.samples == b[i].recording.samples);
    REQUIRE(a[i].recording.events.size() == b[i].recording.events.size());
    for (std::size_t e = 0; e < a[i].recording.events.size(); ++e) {
      CHECK(a[i].recording.events[e].sample_index ==
            b[i].recording.events[e].sample_index);
      CHECK(a[i].recording.events[e].behavioral_correct ==
            b[i].recording.events[e].behavioral_correct);
    }
  }

  SynthConfig other = cfg;
  other.seed = cfg.seed + 1;
  const auto c = erp::generate_dataset(other);
  CHECK(a[0].recording.samples != c[0].recording.samples);
}

TEST_CASE("per-subject seeding keeps early subjects stable") {
  // Adding subjects must not disturb the ones already generated.
  SynthConfig small = tiny_config();
  SynthConfig large = tiny_config();
  large.n_subjects_per_class = 4;
  const auto a = erp::generate_dataset(small);
  const auto b = erp::generate_dataset(large);
  CHECK(a[0].subject_id == b[0].subject_id);
  CHECK(a[0].recording.samples == b[0].recording.samples);
  CHECK(a[1].recording.samples == b[1].recording.samples);
}

TEST_CASE("events land on the configured stimulus grid") {
  const SynthConfig cfg = tiny_config();
  const auto subjects = erp::generate_dataset(cfg);
  REQUIRE(subjects.size() == 4);

  const auto& rec = subjects[0].recording;
  CHECK(rec.rate_hz == 256.0);
  CHECK(rec.channels == std::vector<std::string>{"C3", "C4"});
  REQUIRE(rec.events.size() == cfg.trials_per_subject);
  for (std::size_t t = 0; t < rec.events.size(); ++t) {
    CHECK(rec.events[t].sample_index ==
          cfg.margin_samples + cfg.meta.pre_stimulus_samples +
              t * cfg.inter_stimulus_samples);
    CHECK(rec.events[t].condition == "target");
  }
  const std::size_t expected_len =
      2 * cfg.margin_samples + cfg.meta.pre_stimulus_samples +
      (cfg.trials_per_subject - 1) * cfg.inter_stimulus_samples +
      cfg.meta.post_stimulus_samples;
  CHECK(rec.n_samples() == expected_len);
  // The last epoch fits inside the recording with margin to spare.
  CHECK(rec.events.back().sample_index + cfg.meta.post_stimulus_samples <=
        rec.n_samples());
}

TEST_CASE("subjects are labeled and numbered per class") {
  const auto subjects = erp::generate_dataset(tiny_config());
  REQUIRE(subjects.size() == 4);
  CHECK(subjects[0].subject_id == "regular_01");
  CHECK(subjects[1].subject_id == "regular_02");
  CHECK(subjects[2].subject_id == "dyslexic_01");
  CHECK(subjects[3].subject_id == "dyslexic_02");
  CHECK(subjects[0].label == ClassLabel::regular);
  CHECK(subjects[3].label == ClassLabel::dyslexic);

  SynthConfig montage_cfg = tiny_config();
  montage_cfg.electrodes.clear();  // default montage
  montage_cfg.trials_per_subject = 4;
  montage_cfg.n_subjects_per_class = 1;
  const auto montage = erp::generate_dataset(montage_cfg);
  CHECK(montage[0].recording.channels ==
        erp::ElectrodeLayout::standard_64().labels());
}

TEST_CASE("behavioral error rate drives the correctness flags") {
  SynthConfig cfg = tiny_config();

  cfg.behavioral_error_rate = 0.0;
  for (const auto& s : erp::generate_dataset(cfg)) {
    for (const auto& ev : s.recording.events) {
      CHECK(ev.behavioral_correct);
    }
  }

  cfg.behavioral_error_rate = 1.0;
  for (const auto& s : erp::generate_dataset(cfg)) {
    for (const auto& ev : s.recording.events) {
      CHECK_FALSE(ev.behavioral_correct);
    }
  }

  cfg.behavioral_error_rate = 0.3;
  cfg.trials_per_subject = 32;
  cfg.n_subjects_per_class = 8;
  std::size_t wrong = 0;
  std::size_t total = 0;
  for (const auto& s : erp::generate_dataset(cfg)) {
    for (const auto& ev : s.recording.events) {
      wrong += ev.behavioral_correct ? 0 : 1;
      ++total;
    }
  }
  const double rate = static_cast<double>(wrong) / static_cast<double>(total);
  CHECK(rate > 0.2);
  CHECK(rate < 0.4);
}

TEST_CASE("with all spreads at zero the evoked shape is exact") {
  const SynthConfig cfg = noiseless_config();
  const auto subjects = erp::generate_dataset(cfg);

  const auto& rec = subjects[0].recording;
  const std::vector<double>& x = rec.samples[0];

  for (const auto& ev : rec.events) {
    // Largest sample of the window sits at the 300 ms bump center:
    // 300 ms * 0.256 samples/ms = 76.8, so sample 77 past the event.
    const std::size_t begin = ev.sample_index;
    const std::size_t end = ev.sample_index + cfg.meta.post_stimulus_samples;
    std::size_t argmax = begin;
    for (std::size_t i = begin; i < end; ++i) {
      if (x[i] > x[argmax]) argmax = i;
    }
    CHECK(argmax - ev.sample_index == 77);
    CHECK(x[argmax] == doctest::Approx(10.0).epsilon(0.001));
    // At 150 ms both bumps contribute: the 150 ms bump near its apex
    // plus the foot of the 300 ms bump three widths away.
    const double ts = 256.0 / 1000.0;  // samples per millisecond
    const double d150 = (38.0 - 150.0 * ts) / (25.0 * ts);
    const double d300 = (38.0 - 300.0 * ts) / (50.0 * ts);
    const double expected_150 =
        5.0 * std::exp(-0.5 * d150 * d150) +
        10.0 * std::exp(-0.5 * d300 * d300);
    CHECK(x[ev.sample_index + 38] ==
          doctest::Approx(expected_150).epsilon(1e-9));
    // Pre-stimulus samples are far from every bump and stay near zero.
    CHECK(std::abs(x[ev.sample_index - 60]) < 1e-6);
  }

  // No randomness left: all subjects and channels coincide bitwise.
  CHECK(rec.samples[0] == rec.samples[1]);
  CHECK(subjects[0].recording.samples == subjects[3].recording.samples);
}

TEST_CASE("pink background noise follows a one-over-f power law") {
  const std::vector<double> x = noise_only_channel(4.0, {}, 97);
  CHECK(rms(x) == doctest::Approx(4.0).epsilon(0.10));
  const erp::Spectrum spec = erp::periodogram(x, 256.0);
  const double slope = log_log_slope(spec, 1.5, 40.0, 12);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.30));
}

TEST_CASE("band noise hits its RMS target inside its band") {
  const std::vector<double> x =
      noise_only_channel(0.0, {{20.0, 60.0, 2.0}}, 98);
  CHECK(rms(x) == doctest::Approx(2.0).epsilon(0.10));
  const erp::Spectrum spec = erp::periodogram(x, 256.0);
  const double inside = band_mean_psd(spec, 22.0, 58.0);
  const double below = band_mean_psd(spec, 2.0, 15.0);
  const double above = band_mean_psd(spec, 70.0, 120.0);
  CHECK(below / inside < 0.05);
  CHECK(above / inside < 0.05);
}

TEST_CASE("independent noise sources add in quadrature") {
  const std::vector<double> x =
      noise_only_channel(3.0, {{20.0, 60.0, 4.0}}, 99);
  CHECK(rms(x) == doctest::Approx(5.0).epsilon(0.10));
}

TEST_CASE("the effect mask confines class differences") {
  SynthConfig cfg = noiseless_config();
  cfg.effect_mask = {"C3"};
  cfg.dyslexic.p300 = {300.0, 0.0, 20.0, 0.0, 50.0};
  const auto subjects = erp::generate_dataset(cfg);

  auto peak = [&](const SynthSubject& s, std::size_t channel) {
    const auto& rec = s.recording;
    const std::size_t ev = rec.events[0].sample_index;
    double best = rec.samples[channel][ev];
    for (std::size_t i = ev; i < ev + cfg.meta.post_stimulus_samples; ++i) {
      best = std::max(best, rec.samples[channel][i]);
    }
    return best;
  };

  const SynthSubject& regular = subjects[0];
  const SynthSubject& dyslexic = subjects[2];
  CHECK(peak(regular, 0) == doctest::Approx(10.0).epsilon(0.001));
  CHECK(peak(regular, 1) == doctest::Approx(10.0).epsilon(0.001));
  CHECK(peak(dyslexic, 0) == doctest::Approx(20.0).epsilon(0.001));
  CHECK(peak(dyslexic, 1) == doctest::Approx(10.0).epsilon(0.001));

  cfg.effect_mask = {"F3"};  // not among the configured electrodes
  CHECK_THROWS_AS(erp::generate_dataset(cfg), erp::Error);
}

TEST_CASE("configuration validation rejects bad parameters") {
  const SynthConfig good = tiny_config();
  CHECK_NOTHROW(good.validate());

  auto expect_throw = [](SynthConfig cfg) {
    CHECK_THROWS_AS(cfg.validate(), erp::Error);
  };

  SynthConfig cfg = good;
  cfg.n_subjects_per_class = 0;
  expect_throw(cfg);

  cfg = good;
  cfg.trials_per_subject = 0;
  expect_throw(cfg);

  cfg = good;
  cfg.inter_stimulus_samples = 0;
  expect_throw(cfg);

  cfg = good;
  cfg.regular.p300.latency_mean_ms = 0.0;
  expect_throw(cfg);

  cfg = good;
  cfg.regular.p300.latency_mean_ms = 1600.0;  // past the epoch end
  expect_throw(cfg);

  cfg = good;
  cfg.regular.p150.latency_sd_ms = -1.0;
  expect_throw(cfg);

  cfg = good;
  cfg.regular.p300.width_ms = 0.0;
  expect_throw(cfg);

  cfg = good;
  cfg.dyslexic.noise_bands = {{30.0, 20.0, 1.0}};
  expect_throw(cfg);

  cfg = good;
  cfg.dyslexic.noise_bands = {{20.0, 200.0, 1.0}};  // beyond Nyquist
  expect_throw(cfg);

  cfg = good;
  cfg.dyslexic.noise_bands = {{20.0, 60.0, -1.0}};
  expect_throw(cfg);

  cfg = good;
  cfg.pink_noise_uv = -0.5;
  expect_throw(cfg);

  cfg = good;
  cfg.trial_jitter_sd_ms = -1.0;
  expect_throw(cfg);

  cfg = good;
  cfg.behavioral_error_rate = 1.5;
  expect_throw(cfg);
}

TEST_CASE("benchmark scenarios carry the documented class contrast") {
  const SynthConfig base = erp::default_dyslexia_scenario();
  CHECK(base.n_subjects_per_class == 16);
  CHECK(base.trials_per_subject == 40);
  CHECK(base.regular.p300.latency_mean_ms == 300.0);
  CHECK(base.regular.p300.amplitude_mean_uv == 10.0);
  CHECK(base.dyslexic.p300.latency_mean_ms == 380.0);
  CHECK(base.dyslexic.p300.amplitude_mean_uv == 6.0);
  REQUIRE(base.regular.noise_bands.size() == 1);
  REQUIRE(base.dyslexic.noise_bands.size() == 1);
  CHECK(base.dyslexic.noise_bands[0].amplitude_uv >
        base.regular.noise_bands[0].amplitude_uv);
  CHECK_NOTHROW(base.validate());

  // The mask covers exactly the left anterior and left posterior sites.
  REQUIRE_FALSE(base.effect_mask.empty());
  CHECK(base.effect_mask.size() == 15);
  for (const std::string& label : base.effect_mask) {
    CHECK(erp::hemisphere_of_label(label) == erp::Hemisphere::left);
    CHECK(erp::region_of_label(label) != erp::Region::central);
  }

  const SynthConfig hp = erp::hp_only_scenario();
  CHECK(hp.regular.p300.latency_mean_ms ==
        hp.dyslexic.p300.latency_mean_ms);
  CHECK(hp.regular.p300.amplitude_mean_uv ==
        hp.dyslexic.p300.amplitude_mean_uv);
  REQUIRE(hp.regular.noise_bands.size() == 1);
  CHECK(hp.regular.noise_bands[0].lo_hz == 8.0);
  CHECK(hp.regular.noise_bands[0].hi_hz == 18.0);
  CHECK(hp.dyslexic.noise_bands[0].amplitude_uv >
        hp.regular.noise_bands[0].amplitude_uv);
  CHECK_NOTHROW(hp.validate());

  CHECK(erp::scenario_by_name("default").dyslexic.p300.latency_mean_ms ==
        380.0);
  CHECK(erp::scenario_by_name("hp_only").regular.noise_bands[0].hi_hz ==
        18.0);
  CHECK_THROWS_AS(erp::scenario_by_name("mystery"), erp::Error);
}
