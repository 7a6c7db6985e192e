#pragma once

#include <string>
#include <vector>

#include "erp/features.hpp"
#include "erp/relieff.hpp"
#include "erp/roi.hpp"
#include "erp/svm.hpp"
#include "erp/types.hpp"

namespace erp {

// All writers produce byte-deterministic output: fixed decimal layouts,
// no timestamps, locale-independent number formatting.

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Continuous recording: `rate_hz,<value>` line, `channels,<labels>` line,
// then one comma-separated row of microvolt values per sample. Events
// live in a companion file with rows `sample_index,condition,correct`.
void write_recording_csv(const ContinuousRecording& rec,
                         const std::string& path);
ContinuousRecording read_recording_csv(const std::string& path);

void write_events_csv(const std::vector<StimulusEvent>& events,
                      const std::string& path);
std::vector<StimulusEvent> read_events_csv(const std::string& path);

// Per-trial epoch file: one-line JSON metadata header, then one
// comma-separated row per channel.
void write_epoch_csv(const Epoch& epoch, const std::string& path);
Epoch read_epoch_csv(const std::string& path);

// Averaged ERP file: same shape as the epoch file with subject metadata.
void write_erp_csv(const ErpAverage& erp, const std::string& path);
ErpAverage read_erp_csv(const std::string& path);

// Feature matrix: header `subject_id,class_label,<electrode>:<feature>...`
// then one row per subject. Missing values serialize as NaN.
struct FeatureTable {
  std::vector<std::string> subject_ids;
  std::vector<ClassLabel> labels;
  std::vector<std::vector<double>> matrix;
  std::vector<ColumnRef> columns;
};

FeatureTable feature_table_from_vectors(
    const std::vector<FeatureVector>& vectors);

void write_feature_matrix_csv(const FeatureTable& table,
                              const std::string& path);
FeatureTable read_feature_matrix_csv(const std::string& path);

// Weights: rows `feature_index,electrode,feature_name,weight`, sorted by
// descending weight (ties by ascending index).
void write_weights_csv(const WeightVector& weights,
                       const std::vector<ColumnRef>& columns,
                       const std::string& path);

struct WeightRow {
  std::size_t feature_index = 0;
  std::string electrode;
  std::string feature_name;
  double weight = 0.0;
};

std::vector<WeightRow> read_weights_csv(const std::string& path);

// Electrode layout: rows `label,x,y,hemisphere,region`.
void write_layout_csv(const ElectrodeLayout& layout, const std::string& path);
ElectrodeLayout read_layout_csv(const std::string& path);

// Feature registry: rows
// `name,kind,part,window_start_ms,window_end_ms,params` with params as
// `key=value` pairs joined by ';'.
void write_registry_csv(const FeatureRegistry& registry,
                        const std::string& path);
FeatureRegistry read_registry_csv(const std::string& path);

// Per-repeat confusion record: counts and row percentages per repeat.
void write_confusion_csv(const ConfusionReport& report,
                         const std::string& path);

// Trained model as a single JSON document (exact round-trip numbers).
void write_model_json(const TrainedModel& model, const std::string& path);
TrainedModel read_model_json(const std::string& path);

}  // namespace erp
