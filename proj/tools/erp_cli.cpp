// Batch front end for the ERP analysis pipeline. Talks to the shared
// library exclusively through its C interface.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "erp/erp.h"

namespace {

struct StageCommand {
  const char* name;
  const char* description;
};

constexpr StageCommand kStages[] = {
    {"synth", "generate a synthetic two-class recording set"},
    {"preprocess", "filter, segment, reject and average recordings"},
    {"extract", "split averages into wavelet parts and compute features"},
    {"select", "rank features by neighborhood-contrast weights"},
    {"train", "fit classifiers on the top-ranked features"},
    {"evaluate", "cross-validate and write confusion reports"},
    {"roi", "attribute selected features to scalp regions"},
    {"report", "assemble the human-readable summary"},
};

int exit_code_for(erp_status status) {
  return status == ERP_ERROR_CONFIG ? 2 : 1;
}

int fail(erp_status status, const char* message) {
  std::fprintf(stderr, "error (%s): %s\n", erp_status_name(status),
               message);
  return exit_code_for(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-related potential batch analysis"};
  app.set_version_flag("--version", erp_version());
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "configuration file")
      ->required();
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
      app.add_option("--seed", seed_value, "override the configured seed");
  bool leaky = false;
  app.add_flag("--leaky", leaky,
               "evaluate with whole-dataset feature selection "
               "(optimistic; leaks test information)");
  std::string stage_dir;
  app.add_option("--stage-dir", stage_dir,
                 "artifact directory override for a single stage");

  for (const StageCommand& stage : kStages) {
    app.add_subcommand(stage.name, stage.description)->fallthrough();
  }
  app.add_subcommand("pipeline", "run every stage in order")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are configuration errors
  }

  erp_pipeline* pipeline = nullptr;
  erp_status status = erp_pipeline_create(config_path.c_str(), &pipeline);
  if (status != ERP_OK) return fail(status, erp_last_error());

  if (seed_opt->count() > 0) erp_pipeline_set_seed(pipeline, seed_value);
  if (leaky) erp_pipeline_set_leaky(pipeline, 1);
  if (!stage_dir.empty()) {
    status = erp_pipeline_set_stage_dir(pipeline, stage_dir.c_str());
    if (status != ERP_OK) {
      const int code = fail(status, erp_pipeline_last_error(pipeline));
      erp_pipeline_destroy(pipeline);
      return code;
    }
  }

  const std::string command = app.get_subcommands().front()->get_name();
  status = command == "pipeline"
               ? erp_pipeline_run_all(pipeline)
               : erp_pipeline_run_stage(pipeline, command.c_str());
  if (status != ERP_OK) {
    const int code = fail(status, erp_pipeline_last_error(pipeline));
    erp_pipeline_destroy(pipeline);
    return code;
  }
  erp_pipeline_destroy(pipeline);
  return 0;
}
