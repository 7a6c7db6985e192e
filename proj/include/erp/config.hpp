#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "erp/svm.hpp"
#include "erp/wavelet.hpp"

namespace erp {

// Everything the batch pipeline needs, parsed from a sectioned
// `key = value` config file. Unknown sections or keys are configuration
// errors so typos cannot silently fall back to defaults.
struct PipelineConfig {
  // [paths]
  std::string input_dir;    // recordings to preprocess; empty = synth output
  std::string work_dir = "work";
  std::string output_dir;   // final report copies; empty = work_dir/report
  std::string layout_path;  // empty = built-in 64-channel montage

  // [features]
  std::string registry_path;  // empty = built-in 27-descriptor registry

  // [preprocess]
  double band_lo_hz = 0.1;
  double band_hi_hz = 20.0;
  std::size_t decimation = 1;
  double rejection_threshold_uv = 100.0;

  // [wavelet]
  std::size_t wavelet_levels = 5;
  BoundaryMode boundary = BoundaryMode::periodic;

  // [select]
  std::size_t relieff_k = 10;
  std::vector<std::size_t> selection_sizes = {60, 10};

  // [classifier]
  KernelSpec kernel;
  double regularization_c = 1.0;

  // [evaluate]
  CvScheme scheme = CvScheme::stratified_k_fold;
  std::size_t folds = 5;
  std::size_t repeats = 20;

  // [synth]
  std::string scenario = "default";
  std::size_t synth_subjects_per_class = 0;  // 0 = scenario default
  std::size_t synth_trials_per_subject = 0;  // 0 = scenario default
  double synth_pink_noise_uv = -1.0;         // < 0 = scenario default
  double synth_trial_jitter_sd_ms = -1.0;    // < 0 = scenario default
  double synth_behavioral_error_rate = -1.0; // < 0 = scenario default

  // top level
  std::uint64_t seed = 0;
};

// `origin` labels error messages (usually the file path).
PipelineConfig parse_config_text(const std::string& text,
                                 const std::string& origin);
PipelineConfig load_config(const std::string& path);

}  // namespace erp
