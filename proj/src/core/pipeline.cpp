#include "erp/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "erp/errors.hpp"
#include "erp/features.hpp"
#include "erp/io.hpp"
#include "erp/relieff.hpp"
#include "erp/rng.hpp"
#include "erp/roi.hpp"
#include "erp/signal_core.hpp"
#include "erp/svm.hpp"
#include "erp/synth.hpp"
#include "erp/types.hpp"
#include "erp/wavelet.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace erp {

const char* const kToolVersion = "0.1.0";

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::synth: return "synth";
    case Stage::preprocess: return "preprocess";
    case Stage::extract: return "extract";
    case Stage::select: return "select";
    case Stage::train: return "train";
    case Stage::evaluate: return "evaluate";
    case Stage::roi: return "roi";
    case Stage::report: return "report";
  }
  return "?";
}

Stage stage_from_string(const std::string& s) {
  for (Stage stage :
       {Stage::synth, Stage::preprocess, Stage::extract, Stage::select,
        Stage::train, Stage::evaluate, Stage::roi, Stage::report}) {
    if (s == to_string(stage)) return stage;
  }
  throw_error(ErrorKind::invalid_argument, "unknown stage '" + s + "'");
}

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string file_digest(const std::string& path) {
  return hex64(fnv1a64(read_text_file(path)));
}

// Exclusive advisory lock: created O_EXCL, pid inside, removed on release.
class WorkDirLock {
 public:
  explicit WorkDirLock(const std::string& work_dir) {
    std::error_code ec;
    fs::create_directories(work_dir, ec);
    if (ec) {
      throw_error(ErrorKind::io,
                  work_dir + ": cannot create work directory (" +
                      ec.message() + ")");
    }
    path_ = join(work_dir, ".lock");
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      const int err = errno;
      if (err == EEXIST) {
        throw_error(ErrorKind::io,
                    path_ + ": another run holds the work-directory lock "
                            "(remove the file if no other run is active)");
      }
      throw_error(ErrorKind::io, path_ + ": cannot create lock file (" +
                                     std::strerror(err) + ")");
    }
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%ld\n",
                                static_cast<long>(::getpid()));
    if (::write(fd_, buf, static_cast<std::size_t>(n)) != n) {
      release();
      throw_error(ErrorKind::io, path_ + ": cannot write lock file");
    }
  }

  ~WorkDirLock() { release(); }

  WorkDirLock(const WorkDirLock&) = delete;
  WorkDirLock& operator=(const WorkDirLock&) = delete;

 private:
  void release() {
    if (fd_ >= 0) {
      ::close(fd_);
      ::unlink(path_.c_str());
      fd_ = -1;
    }
  }

  std::string path_;
  int fd_ = -1;
};

// Collects parameter/input/output records for one stage and writes them
// as manifest.json in the stage directory. Digests are 64-bit FNV-1a over
// file bytes; no timestamps, so reruns with identical inputs are
// byte-identical.
class Manifest {
 public:
  Manifest(Stage stage, std::string dir, std::uint64_t seed)
      : stage_(stage), dir_(std::move(dir)), seed_(seed) {}

  json& params() { return params_; }

  void input(const std::string& path) { inputs_[path] = file_digest(path); }

  void output(const std::string& name) {
    outputs_[name] = file_digest(join(dir_, name));
  }

  void write() const {
    json doc;
    doc["stage"] = to_string(stage_);
    doc["tool_version"] = kToolVersion;
    doc["seed"] = seed_;
    doc["parameters"] = params_;
    doc["inputs"] = inputs_;
    doc["outputs"] = outputs_;
    write_text_file(join(dir_, "manifest.json"), doc.dump(2) + "\n");
  }

 private:
  Stage stage_;
  std::string dir_;
  std::uint64_t seed_ = 0;
  json params_ = json::object();
  json inputs_ = json::object();
  json outputs_ = json::object();
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw_error(ErrorKind::io,
                dir + ": cannot create directory (" + ec.message() + ")");
  }
}

std::string require_artifact(const std::string& path, const char* producer) {
  if (!fs::exists(path)) {
    throw_error(ErrorKind::io, path + ": missing artifact (run the " +
                                   std::string(producer) + " stage first)");
  }
  return path;
}

// Header-checked comma-split reader for the small index files the stages
// exchange. Field counts must match the header; fields carry no commas.
std::vector<std::vector<std::string>> read_index_csv(
    const std::string& path, const std::string& expected_header) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != expected_header) {
    throw_error(ErrorKind::io,
                path + ": expected header '" + expected_header + "'");
  }
  const std::size_t n_fields =
      1 + static_cast<std::size_t>(
              std::count(expected_header.begin(), expected_header.end(), ','));
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != n_fields) {
      throw_error(ErrorKind::io, path + ": malformed row '" + line + "'");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::size_t parse_count(const std::string& s, const std::string& path) {
  std::size_t value = 0;
  std::size_t pos = 0;
  try {
    value = std::stoul(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) {
    throw_error(ErrorKind::io, path + ": malformed count '" + s + "'");
  }
  return value;
}

int int_label(ClassLabel label, const std::string& context) {
  switch (label) {
    case ClassLabel::regular: return 0;
    case ClassLabel::dyslexic: return 1;
    case ClassLabel::unknown: break;
  }
  throw_error(ErrorKind::invalid_argument,
              context + ": class label must be regular or dyslexic");
}

std::vector<int> int_labels(const FeatureTable& table,
                            const std::string& path) {
  std::vector<int> labels;
  labels.reserve(table.labels.size());
  for (std::size_t i = 0; i < table.labels.size(); ++i) {
    labels.push_back(int_label(table.labels[i], path + ": subject " +
                                                    table.subject_ids[i]));
  }
  return labels;
}

// Replaces NaN cells with the column mean over all rows (whole-table
// imputation; fold-internal imputation lives in cross_validate).
std::vector<std::vector<double>> impute_whole_table(
    std::vector<std::vector<double>> matrix) {
  std::vector<std::size_t> all(matrix.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const std::vector<double> means = column_means(matrix, all);
  for (auto& row : matrix) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (std::isnan(row[j])) row[j] = means[j];
    }
  }
  return matrix;
}

struct WeightsArtifact {
  WeightVector weights;             // indexed by feature position
  std::vector<ColumnRef> columns;   // indexed by feature position
  std::vector<std::size_t> order;   // file order: descending weight
};

WeightsArtifact load_weights_artifact(const std::string& path,
                                      std::size_t k_neighbors) {
  const std::vector<WeightRow> rows = read_weights_csv(path);
  if (rows.empty()) throw_error(ErrorKind::io, path + ": no weight rows");
  WeightsArtifact art;
  const std::size_t n = rows.size();
  art.weights.weights.assign(n, 0.0);
  art.weights.k_neighbors = k_neighbors;
  art.columns.assign(n, ColumnRef{});
  art.order.reserve(n);
  std::vector<bool> seen(n, false);
  for (const WeightRow& row : rows) {
    if (row.feature_index >= n || seen[row.feature_index]) {
      throw_error(ErrorKind::io,
                  path + ": feature indices must cover 0.." +
                      std::to_string(n - 1) + " exactly once");
    }
    seen[row.feature_index] = true;
    art.weights.weights[row.feature_index] = row.weight;
    art.columns[row.feature_index] =
        ColumnRef{row.electrode, row.feature_name};
    art.order.push_back(row.feature_index);
  }
  return art;
}

std::vector<std::size_t> top_subset(const WeightsArtifact& art,
                                    std::size_t size,
                                    const std::string& path) {
  if (size == 0 || size > art.order.size()) {
    throw_error(ErrorKind::invalid_argument,
                path + ": selection size " + std::to_string(size) +
                    " outside 1.." + std::to_string(art.order.size()));
  }
  return {art.order.begin(),
          art.order.begin() + static_cast<std::ptrdiff_t>(size)};
}

std::size_t reason_count(const std::map<std::string, std::size_t>& m,
                         const char* key) {
  const auto it = m.find(key);
  return it == m.end() ? std::size_t{0} : it->second;
}

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

Pipeline::Pipeline(PipelineConfig cfg, RunOptions opts)
    : cfg_(std::move(cfg)), opts_(std::move(opts)) {
  seed_ = opts_.seed_override.value_or(cfg_.seed);
  if (cfg_.work_dir.empty()) {
    throw_error(ErrorKind::config, "paths.work_dir must not be empty");
  }
  if (cfg_.selection_sizes.empty()) {
    throw_error(ErrorKind::config,
                "select.selection_sizes must not be empty");
  }
}

std::string Pipeline::stage_dir(Stage stage) const {
  if (opts_.stage_dir_override && invoked_stage_ &&
      *invoked_stage_ == stage) {
    return *opts_.stage_dir_override;
  }
  if (stage == Stage::report && !cfg_.output_dir.empty()) {
    return cfg_.output_dir;
  }
  return join(cfg_.work_dir, to_string(stage));
}

std::uint64_t Pipeline::stage_seed(Stage stage) const {
  return derive_seed(seed_, to_string(stage));
}

void Pipeline::run_stage(Stage stage) {
  invoked_stage_ = stage;
  WorkDirLock lock(cfg_.work_dir);
  run_stage_locked(stage);
}

void Pipeline::run_all() {
  if (opts_.stage_dir_override) {
    throw_error(ErrorKind::config,
                "a stage directory override applies to single-stage runs "
                "only");
  }
  invoked_stage_.reset();
  in_run_all_ = true;
  struct Reset {
    bool& flag;
    ~Reset() { flag = false; }
  } reset{in_run_all_};
  WorkDirLock lock(cfg_.work_dir);
  // With an external input directory the preprocess stage ignores synth
  // output, so generating it would be wasted work.
  if (cfg_.input_dir.empty()) run_stage_locked(Stage::synth);
  for (Stage stage : {Stage::preprocess, Stage::extract, Stage::select,
                      Stage::train, Stage::evaluate, Stage::roi,
                      Stage::report}) {
    run_stage_locked(stage);
  }
}

void Pipeline::run_stage_locked(Stage stage) {
  switch (stage) {
    case Stage::synth: run_synth(); return;
    case Stage::preprocess: run_preprocess(); return;
    case Stage::extract: run_extract(); return;
    case Stage::select: run_select(); return;
    case Stage::train: run_train(); return;
    case Stage::evaluate: run_evaluate(); return;
    case Stage::roi: run_roi(); return;
    case Stage::report: run_report(); return;
  }
  throw_error(ErrorKind::internal, "unhandled stage");
}

void Pipeline::run_synth() {
  const std::string dir = stage_dir(Stage::synth);
  ensure_dir(dir);

  SynthConfig scenario;
  try {
    scenario = scenario_by_name(cfg_.scenario);
  } catch (const Error& e) {
    throw_error(ErrorKind::config, std::string("synth.scenario: ") + e.what());
  }
  if (cfg_.synth_subjects_per_class > 0) {
    scenario.n_subjects_per_class = cfg_.synth_subjects_per_class;
  }
  if (cfg_.synth_trials_per_subject > 0) {
    scenario.trials_per_subject = cfg_.synth_trials_per_subject;
  }
  if (cfg_.synth_pink_noise_uv >= 0.0) {
    scenario.pink_noise_uv = cfg_.synth_pink_noise_uv;
  }
  if (cfg_.synth_trial_jitter_sd_ms >= 0.0) {
    scenario.trial_jitter_sd_ms = cfg_.synth_trial_jitter_sd_ms;
  }
  if (cfg_.synth_behavioral_error_rate >= 0.0) {
    scenario.behavioral_error_rate = cfg_.synth_behavioral_error_rate;
  }
  scenario.seed = stage_seed(Stage::synth);
  scenario.validate();

  Manifest manifest(Stage::synth, dir, scenario.seed);
  manifest.params()["scenario"] = cfg_.scenario;
  manifest.params()["subjects_per_class"] = scenario.n_subjects_per_class;
  manifest.params()["trials_per_subject"] = scenario.trials_per_subject;
  manifest.params()["pink_noise_uv"] = scenario.pink_noise_uv;
  manifest.params()["trial_jitter_sd_ms"] = scenario.trial_jitter_sd_ms;
  manifest.params()["behavioral_error_rate"] =
      scenario.behavioral_error_rate;

  const std::vector<SynthSubject> subjects = generate_dataset(scenario);

  std::string index = "subject_id,class_label,recording,events\n";
  for (const SynthSubject& s : subjects) {
    const std::string rec_name = "rec_" + s.subject_id + ".csv";
    const std::string events_name = "events_" + s.subject_id + ".csv";
    write_recording_csv(s.recording, join(dir, rec_name));
    write_events_csv(s.recording.events, join(dir, events_name));
    manifest.output(rec_name);
    manifest.output(events_name);
    index += s.subject_id;
    index += ',';
    index += to_string(s.label);
    index += ',';
    index += rec_name;
    index += ',';
    index += events_name;
    index += '\n';
  }
  write_text_file(join(dir, "subjects.csv"), index);
  manifest.output("subjects.csv");
  manifest.write();
}

void Pipeline::run_preprocess() {
  const std::string dir = stage_dir(Stage::preprocess);
  ensure_dir(dir);
  const std::string in_dir =
      cfg_.input_dir.empty() ? stage_dir(Stage::synth) : cfg_.input_dir;
  const std::string index_path =
      require_artifact(join(in_dir, "subjects.csv"),
                       cfg_.input_dir.empty() ? "synth" : "input");

  Manifest manifest(Stage::preprocess, dir, stage_seed(Stage::preprocess));
  manifest.params()["input_dir"] = in_dir;
  manifest.params()["band_lo_hz"] = cfg_.band_lo_hz;
  manifest.params()["band_hi_hz"] = cfg_.band_hi_hz;
  manifest.params()["decimation"] = cfg_.decimation;
  manifest.params()["rejection_threshold_uv"] = cfg_.rejection_threshold_uv;
  manifest.input(index_path);

  const auto rows =
      read_index_csv(index_path, "subject_id,class_label,recording,events");
  if (rows.empty()) {
    throw_error(ErrorKind::io, index_path + ": no subjects listed");
  }
  if (cfg_.decimation == 0) {
    throw_error(ErrorKind::config, "preprocess.decimation must be >= 1");
  }

  // One filter per distinct sampling rate, reused across channels and
  // subjects so the kernel spectrum cache pays off.
  std::map<double, ZeroPhaseFir> filters;

  std::string erp_index = "subject_id,class_label,erp\n";
  std::string log =
      "subject_id,n_events,n_epochs,skipped_edge,rejected_behavioral,"
      "rejected_amplitude,n_kept\n";
  std::vector<ErpAverage> by_class[2];

  for (const auto& row : rows) {
    const std::string& subject_id = row[0];
    ClassLabel label;
    try {
      label = class_label_from_string(row[1]);
    } catch (const Error& e) {
      throw_error(ErrorKind::io, index_path + ": " + e.what());
    }
    const int li = int_label(label, index_path + ": subject " + subject_id);
    const std::string rec_path = join(in_dir, row[2]);
    const std::string events_path = join(in_dir, row[3]);
    manifest.input(rec_path);
    manifest.input(events_path);

    ContinuousRecording rec = read_recording_csv(rec_path);
    rec.events = read_events_csv(events_path);
    rec.validate();

    const ZeroPhaseFir& fir =
        filters
            .try_emplace(rec.rate_hz, rec.rate_hz, cfg_.band_lo_hz,
                         cfg_.band_hi_hz)
            .first->second;
    for (auto& channel : rec.samples) channel = fir.apply(channel);

    if (cfg_.decimation > 1) {
      double new_rate = rec.rate_hz;
      for (auto& channel : rec.samples) {
        DecimateResult d = decimate(channel, rec.rate_hz, cfg_.decimation);
        channel = std::move(d.samples);
        new_rate = d.rate_hz;
      }
      rec.rate_hz = new_rate;
      for (StimulusEvent& ev : rec.events) {
        ev.sample_index /= cfg_.decimation;
      }
    }

    SamplingMeta meta;
    meta.rate_hz = rec.rate_hz;
    meta.validate();

    const SegmentResult seg = segment_epochs(rec, meta);
    std::vector<Epoch> corrected;
    corrected.reserve(seg.epochs.size());
    for (const Epoch& epoch : seg.epochs) {
      corrected.push_back(baseline_correct(epoch));
    }
    const RejectResult rej =
        reject_trials(corrected, cfg_.rejection_threshold_uv);
    if (rej.kept.empty()) {
      throw_error(ErrorKind::empty_input,
                  "subject " + subject_id +
                      ": no trials survive rejection");
    }

    ErpAverage erp = average_erp(rej.kept);
    erp.subject_id = subject_id;
    erp.class_label = label;
    const std::string erp_name = "erp_" + subject_id + ".csv";
    write_erp_csv(erp, join(dir, erp_name));
    manifest.output(erp_name);

    erp_index += subject_id;
    erp_index += ',';
    erp_index += to_string(label);
    erp_index += ',';
    erp_index += erp_name;
    erp_index += '\n';

    log += subject_id;
    log += ',' + std::to_string(rec.events.size());
    log += ',' + std::to_string(seg.epochs.size());
    log += ',' + std::to_string(seg.skipped.size());
    log += ',' +
           std::to_string(reason_count(rej.rejected_by_reason, "behavioral"));
    log += ',' +
           std::to_string(reason_count(rej.rejected_by_reason, "amplitude"));
    log += ',' + std::to_string(rej.kept.size());
    log += '\n';

    by_class[li].push_back(std::move(erp));
  }

  write_text_file(join(dir, "erps.csv"), erp_index);
  manifest.output("erps.csv");
  write_text_file(join(dir, "preprocess_log.csv"), log);
  manifest.output("preprocess_log.csv");

  const char* grand_names[2] = {"grand_regular.csv", "grand_dyslexic.csv"};
  for (int li = 0; li < 2; ++li) {
    if (by_class[li].empty()) continue;
    ErpAverage grand = grand_average(by_class[li]);
    grand.subject_id =
        li == 0 ? "grand_regular" : "grand_dyslexic";
    write_erp_csv(grand, join(dir, grand_names[li]));
    manifest.output(grand_names[li]);
  }
  manifest.write();
}

void Pipeline::run_extract() {
  const std::string dir = stage_dir(Stage::extract);
  ensure_dir(dir);
  const std::string pre_dir = stage_dir(Stage::preprocess);
  const std::string index_path =
      require_artifact(join(pre_dir, "erps.csv"), "preprocess");

  Manifest manifest(Stage::extract, dir, stage_seed(Stage::extract));
  manifest.params()["wavelet_levels"] = cfg_.wavelet_levels;
  manifest.params()["boundary"] = to_string(cfg_.boundary);
  manifest.params()["registry"] =
      cfg_.registry_path.empty() ? std::string("builtin") : cfg_.registry_path;
  manifest.input(index_path);

  FeatureRegistry registry;
  if (cfg_.registry_path.empty()) {
    registry = default_registry();
  } else {
    manifest.input(cfg_.registry_path);
    registry = read_registry_csv(cfg_.registry_path);
  }

  const auto rows =
      read_index_csv(index_path, "subject_id,class_label,erp");
  if (rows.empty()) {
    throw_error(ErrorKind::io, index_path + ": no subjects listed");
  }

  std::vector<FeatureVector> vectors;
  vectors.reserve(rows.size());
  for (const auto& row : rows) {
    const std::string erp_path = join(pre_dir, row[2]);
    manifest.input(erp_path);
    const ErpAverage erp = read_erp_csv(erp_path);
    const std::vector<LpHp> parts =
        split_erp(erp, cfg_.wavelet_levels, WaveletFilterPair::daubechies4(),
                  cfg_.boundary);
    FeatureVector vec =
        extract_feature_vector(parts, erp.channels, erp.meta, registry);
    vec.subject_id = row[0];
    try {
      vec.class_label = class_label_from_string(row[1]);
    } catch (const Error& e) {
      throw_error(ErrorKind::io, index_path + ": " + e.what());
    }
    vectors.push_back(std::move(vec));
  }

  const FeatureTable table = feature_table_from_vectors(vectors);
  write_feature_matrix_csv(table, join(dir, "features.csv"));
  manifest.output("features.csv");
  write_registry_csv(registry, join(dir, "registry.csv"));
  manifest.output("registry.csv");
  manifest.params()["n_features"] = table.columns.size();
  manifest.write();
}

void Pipeline::run_select() {
  const std::string dir = stage_dir(Stage::select);
  ensure_dir(dir);
  const std::string features_path = require_artifact(
      join(stage_dir(Stage::extract), "features.csv"), "extract");

  Manifest manifest(Stage::select, dir, stage_seed(Stage::select));
  manifest.params()["relieff_k"] = cfg_.relieff_k;
  manifest.input(features_path);

  const FeatureTable table = read_feature_matrix_csv(features_path);
  const std::vector<int> labels = int_labels(table, features_path);
  const LabeledDataset ds =
      LabeledDataset::from_matrix(impute_whole_table(table.matrix), labels);
  const WeightVector weights = relieff_weights(ds, cfg_.relieff_k);
  write_weights_csv(weights, table.columns, join(dir, "weights.csv"));
  manifest.output("weights.csv");
  manifest.write();
}

void Pipeline::run_train() {
  const std::string dir = stage_dir(Stage::train);
  ensure_dir(dir);
  const std::string features_path = require_artifact(
      join(stage_dir(Stage::extract), "features.csv"), "extract");
  const std::string weights_path = require_artifact(
      join(stage_dir(Stage::select), "weights.csv"), "select");

  Manifest manifest(Stage::train, dir, stage_seed(Stage::train));
  manifest.params()["kernel"] = to_string(cfg_.kernel.kind);
  manifest.params()["gamma"] = cfg_.kernel.gamma;
  manifest.params()["regularization_c"] = cfg_.regularization_c;
  manifest.params()["selection_sizes"] = cfg_.selection_sizes;
  manifest.input(features_path);
  manifest.input(weights_path);

  const FeatureTable table = read_feature_matrix_csv(features_path);
  const std::vector<int> labels = int_labels(table, features_path);
  const LabeledDataset ds =
      LabeledDataset::from_matrix(impute_whole_table(table.matrix), labels);
  const WeightsArtifact art =
      load_weights_artifact(weights_path, cfg_.relieff_k);
  if (art.order.size() != table.columns.size()) {
    throw_error(ErrorKind::shape,
                weights_path + ": weight count does not match the feature "
                               "matrix");
  }

  for (std::size_t size : cfg_.selection_sizes) {
    const std::vector<std::size_t> subset =
        top_subset(art, size, weights_path);
    const TrainedModel model = train(ds, subset, cfg_.kernel,
                                     cfg_.regularization_c,
                                     stage_seed(Stage::train));
    const std::string name = "model_" + std::to_string(size) + ".json";
    write_model_json(model, join(dir, name));
    manifest.output(name);
  }
  manifest.write();
}

void Pipeline::run_evaluate() {
  const std::string dir = stage_dir(Stage::evaluate);
  ensure_dir(dir);
  const std::string features_path = require_artifact(
      join(stage_dir(Stage::extract), "features.csv"), "extract");

  Manifest manifest(Stage::evaluate, dir, stage_seed(Stage::evaluate));
  manifest.params()["scheme"] = to_string(cfg_.scheme);
  manifest.params()["folds"] = cfg_.folds;
  manifest.params()["repeats"] = cfg_.repeats;
  manifest.params()["relieff_k"] = cfg_.relieff_k;
  manifest.params()["selection_sizes"] = cfg_.selection_sizes;
  manifest.params()["leaky_selection"] = opts_.leaky;
  manifest.params()["kernel"] = to_string(cfg_.kernel.kind);
  manifest.params()["gamma"] = cfg_.kernel.gamma;
  manifest.params()["regularization_c"] = cfg_.regularization_c;
  manifest.input(features_path);

  const FeatureTable table = read_feature_matrix_csv(features_path);
  const std::vector<int> labels = int_labels(table, features_path);

  WeightsArtifact art;
  std::string weights_path;
  if (opts_.leaky) {
    weights_path = require_artifact(
        join(stage_dir(Stage::select), "weights.csv"), "select");
    manifest.input(weights_path);
    art = load_weights_artifact(weights_path, cfg_.relieff_k);
    if (art.order.size() != table.columns.size()) {
      throw_error(ErrorKind::shape,
                  weights_path + ": weight count does not match the "
                                 "feature matrix");
    }
  }

  for (std::size_t size : cfg_.selection_sizes) {
    CvOptions options;
    options.scheme = cfg_.scheme;
    options.folds = cfg_.folds;
    options.repeats = cfg_.repeats;
    options.seed = stage_seed(Stage::evaluate);
    options.kernel = cfg_.kernel;
    options.c = cfg_.regularization_c;
    options.selection.relieff_k = cfg_.relieff_k;
    options.selection.n_features = size;
    if (opts_.leaky) {
      options.fixed_subset = top_subset(art, size, weights_path);
    }
    const ConfusionReport report =
        cross_validate(table.matrix, labels, options);
    const std::string txt_name =
        "confusion_" + std::to_string(size) + ".txt";
    const std::string csv_name =
        "confusion_" + std::to_string(size) + ".csv";
    write_text_file(join(dir, txt_name), render_confusion_table(report));
    write_confusion_csv(report, join(dir, csv_name));
    manifest.output(txt_name);
    manifest.output(csv_name);
  }
  manifest.write();
}

void Pipeline::run_roi() {
  const std::string dir = stage_dir(Stage::roi);
  ensure_dir(dir);
  const std::string weights_path = require_artifact(
      join(stage_dir(Stage::select), "weights.csv"), "select");

  const std::size_t size = cfg_.selection_sizes.front();
  Manifest manifest(Stage::roi, dir, stage_seed(Stage::roi));
  manifest.params()["selection_size"] = size;
  manifest.params()["layout"] =
      cfg_.layout_path.empty() ? std::string("builtin") : cfg_.layout_path;
  manifest.input(weights_path);

  const WeightsArtifact art =
      load_weights_artifact(weights_path, cfg_.relieff_k);
  const std::vector<std::size_t> selected =
      top_subset(art, size, weights_path);

  ElectrodeLayout layout;
  if (cfg_.layout_path.empty()) {
    layout = ElectrodeLayout::standard_64();
  } else {
    manifest.input(cfg_.layout_path);
    layout = read_layout_csv(cfg_.layout_path);
  }

  const ElectrodeShares shares =
      attribute_selection(selected, art.columns, art.weights);
  const RegionReport report = aggregate_regions(shares, layout);
  write_text_file(join(dir, "region_report.txt"),
                  render_region_report(report, layout));
  manifest.output("region_report.txt");
  render_scalp_map(report, layout, join(dir, "scalp_map.svg"));
  manifest.output("scalp_map.svg");
  manifest.write();
}

void Pipeline::run_report() {
  const std::string dir = stage_dir(Stage::report);
  ensure_dir(dir);
  const std::string pre_log = require_artifact(
      join(stage_dir(Stage::preprocess), "preprocess_log.csv"),
      "preprocess");

  Manifest manifest(Stage::report, dir, stage_seed(Stage::report));
  manifest.input(pre_log);

  std::string out;
  out += "batch analysis summary\n";
  out += "======================\n";
  out += "tool version: ";
  out += kToolVersion;
  out += "\nseed: " + std::to_string(seed_) + "\n\n";

  out += "configuration\n-------------\n";
  out += "bandpass: " + format_double(cfg_.band_lo_hz, "%.2f") + "-" +
         format_double(cfg_.band_hi_hz, "%.2f") + " Hz, decimation " +
         std::to_string(cfg_.decimation) + ", rejection threshold " +
         format_double(cfg_.rejection_threshold_uv, "%.1f") + " uV\n";
  out += "wavelet: " + std::to_string(cfg_.wavelet_levels) + " levels, " +
         to_string(cfg_.boundary) + " boundary\n";
  out += "selection: neighborhood k " + std::to_string(cfg_.relieff_k) +
         ", sizes";
  for (std::size_t i = 0; i < cfg_.selection_sizes.size(); ++i) {
    out += (i == 0 ? " " : ", ") + std::to_string(cfg_.selection_sizes[i]);
  }
  out += "\n";
  out += std::string("classifier: ") + to_string(cfg_.kernel.kind) +
         " kernel, C " + format_double(cfg_.regularization_c, "%g") + "\n";
  out += std::string("evaluation: ") + to_string(cfg_.scheme) + ", " +
         std::to_string(cfg_.folds) + " folds, " +
         std::to_string(cfg_.repeats) + " repeats\n\n";

  out += "subjects\n--------\n";
  const auto log_rows = read_index_csv(
      pre_log,
      "subject_id,n_events,n_epochs,skipped_edge,rejected_behavioral,"
      "rejected_amplitude,n_kept");
  std::size_t kept_total = 0;
  for (const auto& row : log_rows) {
    kept_total += parse_count(row[6], pre_log);
  }
  out += std::to_string(log_rows.size()) + " subjects, " +
         std::to_string(kept_total) + " trials kept";
  if (!log_rows.empty()) {
    out += " (mean " +
           format_double(static_cast<double>(kept_total) /
                             static_cast<double>(log_rows.size()),
                         "%.1f") +
           " per subject)";
  }
  out += "\n\n";

  for (std::size_t size : cfg_.selection_sizes) {
    const std::string path = require_artifact(
        join(stage_dir(Stage::evaluate),
             "confusion_" + std::to_string(size) + ".txt"),
        "evaluate");
    manifest.input(path);
    out += "classification, " + std::to_string(size) + " features\n";
    out += std::string(16 + std::to_string(size).size() + 10, '-') + "\n";
    out += read_text_file(path);
    out += "\n";
  }

  const std::string region_path = require_artifact(
      join(stage_dir(Stage::roi), "region_report.txt"), "roi");
  manifest.input(region_path);
  out += "region attribution, " +
         std::to_string(cfg_.selection_sizes.front()) + " features\n";
  out += std::string(20 +
                         std::to_string(cfg_.selection_sizes.front()).size() +
                         10,
                     '-') +
         "\n";
  out += read_text_file(region_path);

  write_text_file(join(dir, "summary.txt"), out);
  manifest.output("summary.txt");

  const std::string svg_src = require_artifact(
      join(stage_dir(Stage::roi), "scalp_map.svg"), "roi");
  manifest.input(svg_src);
  write_text_file(join(dir, "scalp_map.svg"), read_text_file(svg_src));
  manifest.output("scalp_map.svg");
  manifest.write();
}

}  // namespace erp
