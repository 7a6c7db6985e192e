// Config parser tests: defaults, every key, and strict rejection of
// unknown sections or keys with file:line positions in the message.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "erp/config.hpp"
#include "erp/errors.hpp"
#include "erp/svm.hpp"
#include "erp/wavelet.hpp"

namespace {

using erp::Error;
using erp::ErrorKind;
using erp::PipelineConfig;

std::string error_message(const std::string& text) {
  try {
    erp::parse_config_text(text, "test.cfg");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

}  // namespace

TEST_CASE("an empty config yields the documented defaults") {
  const PipelineConfig cfg = erp::parse_config_text("", "test.cfg");
  CHECK(cfg.input_dir.empty());
  CHECK(cfg.work_dir == "work");
  CHECK(cfg.output_dir.empty());
  CHECK(cfg.layout_path.empty());
  CHECK(cfg.registry_path.empty());
  CHECK(cfg.band_lo_hz == 0.1);
  CHECK(cfg.band_hi_hz == 20.0);
  CHECK(cfg.decimation == 1);
  CHECK(cfg.rejection_threshold_uv == 100.0);
  CHECK(cfg.wavelet_levels == 5);
  CHECK(cfg.boundary == erp::BoundaryMode::periodic);
  CHECK(cfg.relieff_k == 10);
  CHECK(cfg.selection_sizes == std::vector<std::size_t>{60, 10});
  CHECK(cfg.kernel.kind == erp::KernelKind::linear);
  CHECK(cfg.kernel.gamma == 0.0);
  CHECK(cfg.regularization_c == 1.0);
  CHECK(cfg.scheme == erp::CvScheme::stratified_k_fold);
  CHECK(cfg.folds == 5);
  CHECK(cfg.repeats == 20);
  CHECK(cfg.scenario == "default");
  CHECK(cfg.synth_subjects_per_class == 0);
  CHECK(cfg.synth_trials_per_subject == 0);
  CHECK(cfg.synth_pink_noise_uv == -1.0);
  CHECK(cfg.synth_trial_jitter_sd_ms == -1.0);
  CHECK(cfg.synth_behavioral_error_rate == -1.0);
  CHECK(cfg.seed == 0);
}

TEST_CASE("every key parses from a full config") {
  const std::string text =
      "# full configuration exercise\n"
      "seed = 12345\n"
      "\n"
      "[paths]\n"
      "input_dir = /data/in\n"
      "work_dir = /tmp/run\n"
      "output_dir = /tmp/out\n"
      "layout = custom_layout.csv\n"
      "\n"
      "[features]\n"
      "registry = custom_registry.csv\n"
      "\n"
      "[preprocess]\n"
      "band_lo_hz = 0.5\n"
      "band_hi_hz = 30\n"
      "decimation = 2\n"
      "rejection_threshold_uv = 80\n"
      "\n"
      "[wavelet]\n"
      "levels = 4\n"
      "boundary = symmetric\n"
      "\n"
      "[select]\n"
      "relieff_k = 7\n"
      "sizes = 40, 20, 5\n"
      "\n"
      "[classifier]\n"
      "kernel = gaussian\n"
      "gamma = 0.125\n"
      "c = 2.5\n"
      "\n"
      "[evaluate]\n"
      "scheme = loso\n"
      "folds = 4\n"
      "repeats = 10\n"
      "\n"
      "[synth]\n"
      "scenario = hp_only\n"
      "subjects_per_class = 6\n"
      "trials_per_subject = 24\n"
      "pink_noise_uv = 3.5\n"
      "trial_jitter_sd_ms = 10\n"
      "behavioral_error_rate = 0.1\n";
  const PipelineConfig cfg = erp::parse_config_text(text, "test.cfg");

  CHECK(cfg.seed == 12345);
  CHECK(cfg.input_dir == "/data/in");
  CHECK(cfg.work_dir == "/tmp/run");
  CHECK(cfg.output_dir == "/tmp/out");
  CHECK(cfg.layout_path == "custom_layout.csv");
  CHECK(cfg.registry_path == "custom_registry.csv");
  CHECK(cfg.band_lo_hz == 0.5);
  CHECK(cfg.band_hi_hz == 30.0);
  CHECK(cfg.decimation == 2);
  CHECK(cfg.rejection_threshold_uv == 80.0);
  CHECK(cfg.wavelet_levels == 4);
  CHECK(cfg.boundary == erp::BoundaryMode::symmetric);
  CHECK(cfg.relieff_k == 7);
  CHECK(cfg.selection_sizes == std::vector<std::size_t>{40, 20, 5});
  CHECK(cfg.kernel.kind == erp::KernelKind::gaussian);
  CHECK(cfg.kernel.gamma == 0.125);
  CHECK(cfg.regularization_c == 2.5);
  CHECK(cfg.scheme == erp::CvScheme::leave_one_out);
  CHECK(cfg.folds == 4);
  CHECK(cfg.repeats == 10);
  CHECK(cfg.scenario == "hp_only");
  CHECK(cfg.synth_subjects_per_class == 6);
  CHECK(cfg.synth_trials_per_subject == 24);
  CHECK(cfg.synth_pink_noise_uv == 3.5);
  CHECK(cfg.synth_trial_jitter_sd_ms == 10.0);
  CHECK(cfg.synth_behavioral_error_rate == 0.1);
}

TEST_CASE("comments, blank lines, and whitespace are tolerated") {
  const std::string text =
      "; semicolon comment\n"
      "   # indented hash comment\n"
      "\n"
      "  seed   =   9  \n"
      "[ preprocess ]\r\n"
      "  band_hi_hz=25\r\n";
  const PipelineConfig cfg = erp::parse_config_text(text, "test.cfg");
  CHECK(cfg.seed == 9);
  CHECK(cfg.band_hi_hz == 25.0);
}

TEST_CASE("unknown sections and keys fail with file and line") {
  CHECK(error_message("[frobnicate]\n") ==
        "test.cfg:1: unknown section [frobnicate]");
  CHECK(error_message("\n\n[select]\nselection_sizes = 10\n") ==
        "test.cfg:4: unknown key 'select.selection_sizes'");
  CHECK(error_message("[paths]\ninputdir = x\n") ==
        "test.cfg:2: unknown key 'paths.inputdir'");
  CHECK(error_message("scenario = default\n") ==
        "test.cfg:1: unknown key 'scenario' outside sections");
  CHECK(error_message("[synth\n") == "test.cfg:1: unterminated section");
  CHECK(error_message("[paths]\njust words\n") ==
        "test.cfg:2: expected key = value");
  CHECK(error_message("[paths]\n= x\n") == "test.cfg:2: empty key");
}

TEST_CASE("malformed values fail with the offending key name") {
  const std::string msg = error_message("[preprocess]\ndecimation = fast\n");
  CHECK(msg.find("test.cfg:2:") == 0);
  CHECK(msg.find("preprocess.decimation") != std::string::npos);

  CHECK(error_message("[preprocess]\ndecimation = 0\n").find(
            "must be positive") != std::string::npos);
  CHECK(error_message("seed = -4\n").find("nonnegative") !=
        std::string::npos);
  CHECK(error_message("[select]\nsizes = 10, 0\n").find(
            "positive integers") != std::string::npos);
  CHECK(error_message("[select]\nsizes = \n").find("list is empty") !=
        std::string::npos);
  CHECK(error_message("[classifier]\ngamma = -1\n").find("must be > 0") !=
        std::string::npos);
  CHECK(error_message("[classifier]\nc = 0\n").find("must be > 0") !=
        std::string::npos);
  CHECK(error_message("[classifier]\nkernel = poly\n").find(
            "classifier.kernel") != std::string::npos);
  CHECK(error_message("[evaluate]\nscheme = holdout\n").find(
            "evaluate.scheme") != std::string::npos);
  CHECK(error_message("[evaluate]\nfolds = 1\n").find(
            "at least two folds") != std::string::npos);
  CHECK(error_message("[wavelet]\nboundary = zero\n").find(
            "wavelet.boundary") != std::string::npos);
  CHECK(error_message("[synth]\nbehavioral_error_rate = 1.5\n").find(
            "[0, 1]") != std::string::npos);
  CHECK(error_message("[preprocess]\nrejection_threshold_uv = 0\n").find(
            "must be > 0") != std::string::npos);
}

TEST_CASE("band edges are validated as a pair") {
  CHECK(error_message("[preprocess]\nband_lo_hz = 30\nband_hi_hz = 20\n")
            .find("band edges") != std::string::npos);
  CHECK(error_message("[preprocess]\nband_lo_hz = -0.1\n").find(
            "band edges") != std::string::npos);
  // Equal edges are rejected; a zero low edge is allowed.
  CHECK(error_message("[preprocess]\nband_lo_hz = 20\n").find(
            "band edges") != std::string::npos);
  const PipelineConfig cfg =
      erp::parse_config_text("[preprocess]\nband_lo_hz = 0\n", "test.cfg");
  CHECK(cfg.band_lo_hz == 0.0);
}

TEST_CASE("configs load from disk and report missing files as config errors") {
  const std::string path = "config_roundtrip_test.cfg";
  {
    std::ofstream out(path, std::ios::binary);
    out << "seed = 77\n[select]\nsizes = 12\n";
  }
  const PipelineConfig cfg = erp::load_config(path);
  CHECK(cfg.seed == 77);
  CHECK(cfg.selection_sizes == std::vector<std::size_t>{12});
  std::remove(path.c_str());

  try {
    erp::load_config("definitely_absent.cfg");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
}

TEST_CASE("shipped example configurations parse cleanly") {
  const PipelineConfig bench =
      erp::load_config(ERP_DATA_DIR "/configs/benchmark.cfg");
  CHECK(bench.seed == 42);
  CHECK(bench.work_dir == "work/benchmark");
  CHECK(bench.selection_sizes == std::vector<std::size_t>{60, 10});
  CHECK(bench.band_lo_hz == 0.1);
  CHECK(bench.repeats == 20);

  const PipelineConfig quick =
      erp::load_config(ERP_DATA_DIR "/configs/quick.cfg");
  CHECK(quick.synth_subjects_per_class == 6);
  CHECK(quick.band_lo_hz == 2.0);
  CHECK(quick.selection_sizes == std::vector<std::size_t>{12, 6});
}
