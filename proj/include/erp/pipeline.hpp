#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "erp/config.hpp"

namespace erp {

extern const char* const kToolVersion;

enum class Stage {
  synth,
  preprocess,
  extract,
  select,
  train,
  evaluate,
  roi,
  report,
};

const char* to_string(Stage stage);
Stage stage_from_string(const std::string& s);

struct RunOptions {
  bool leaky = false;  // evaluate: reuse the full-data selection per size
  std::optional<std::uint64_t> seed_override;
  // Redirects the invoked stage's artifact directory away from
  // work_dir/<stage>; applies to single-stage runs only.
  std::optional<std::string> stage_dir_override;
};

// Batch pipeline over persistent artifacts. Every stage reads the
// previous stage's files, writes its own plus a manifest (input/output
// digests, parameters, seed, tool version), and is byte-deterministic
// for identical inputs. An advisory lock file in work_dir guards
// against concurrent runs.
class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, RunOptions opts);

  // Runs one stage (with the work-dir lock held for its duration).
  void run_stage(Stage stage);

  // Runs synth .. report in order under one lock acquisition.
  void run_all();

  std::string stage_dir(Stage stage) const;

 private:
  void run_stage_locked(Stage stage);
  void run_synth();
  void run_preprocess();
  void run_extract();
  void run_select();
  void run_train();
  void run_evaluate();
  void run_roi();
  void run_report();
  std::uint64_t stage_seed(Stage stage) const;

  PipelineConfig cfg_;
  RunOptions opts_;
  std::uint64_t seed_ = 0;
  bool in_run_all_ = false;
  std::optional<Stage> invoked_stage_;  // receives the stage-dir override
};

}  // namespace erp
