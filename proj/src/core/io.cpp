#include "erp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string_view>
#include <system_error>

#include "json.hpp"

#include "erp/errors.hpp"

namespace erp {

namespace {

using nlohmann::json;

[[noreturn]] void fail_io(const std::string& what, const std::string& path) {
  throw_error(ErrorKind::io, what + ": " + path);
}

void append_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "NaN";
    return;
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_fixed(std::string& out, double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::fixed, precision);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view s, const std::string& path) {
  if (s == "NaN" || s == "nan") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail_io("malformed number '" + std::string(s) + "'", path);
  }
  return v;
}

std::size_t parse_size(std::string_view s, const std::string& path) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail_io("malformed integer '" + std::string(s) + "'", path);
  }
  return v;
}

std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Iterates non-empty lines of a buffer without copying.
struct LineReader {
  std::string_view rest;

  bool next(std::string_view& line) {
    while (!rest.empty()) {
      const std::size_t pos = rest.find('\n');
      if (pos == std::string_view::npos) {
        line = rest;
        rest = {};
      } else {
        line = rest.substr(0, pos);
        rest.remove_prefix(pos + 1);
      }
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) return true;
    }
    return false;
  }
};

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open file", path);
  std::string content;
  in.seekg(0, std::ios::end);
  content.resize(static_cast<std::size_t>(in.tellg()));
  in.seekg(0, std::ios::beg);
  in.read(content.data(), static_cast<std::streamsize>(content.size()));
  if (!in) fail_io("failed reading file", path);
  return content;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write file", path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail_io("failed writing file", path);
}

void write_recording_csv(const ContinuousRecording& rec,
                         const std::string& path) {
  if (rec.channels.empty() || rec.samples.size() != rec.channels.size()) {
    throw_error(ErrorKind::shape, "recording channels/samples mismatch");
  }
  const std::size_t n = rec.n_samples();
  std::string buf;
  buf.reserve(32 + rec.channels.size() * (n * 10 + 8));
  buf += "rate_hz,";
  append_number(buf, rec.rate_hz);
  buf += "\nchannels";
  for (const std::string& ch : rec.channels) {
    buf += ',';
    buf += ch;
  }
  buf += '\n';
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t c = 0; c < rec.channels.size(); ++c) {
      if (c > 0) buf += ',';
      append_fixed(buf, rec.samples[c][t], 4);
    }
    buf += '\n';
  }
  write_text_file(path, buf);
}

ContinuousRecording read_recording_csv(const std::string& path) {
  const std::string content = read_text_file(path);
  LineReader lines{content};
  std::string_view line;

  ContinuousRecording rec;
  if (!lines.next(line) || !line.starts_with("rate_hz,")) {
    fail_io("expected a rate_hz header line", path);
  }
  rec.rate_hz = parse_double(line.substr(8), path);
  if (!lines.next(line) || !line.starts_with("channels,")) {
    fail_io("expected a channels header line", path);
  }
  for (auto& label : split(line.substr(9), ',')) {
    if (label.empty()) fail_io("empty channel label", path);
    rec.channels.push_back(std::move(label));
  }
  if (rec.channels.empty()) fail_io("no channels listed", path);
  rec.samples.resize(rec.channels.size());

  while (lines.next(line)) {
    const char* p = line.data();
    const char* end = p + line.size();
    for (std::size_t c = 0; c < rec.channels.size(); ++c) {
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) fail_io("malformed sample row", path);
      rec.samples[c].push_back(v);
      p = res.ptr;
      if (c + 1 < rec.channels.size()) {
        if (p == end || *p != ',') fail_io("short sample row", path);
        ++p;
      }
    }
    if (p != end) fail_io("excess values in sample row", path);
  }
  if (rec.n_samples() == 0) fail_io("recording has no samples", path);
  return rec;
}

void write_events_csv(const std::vector<StimulusEvent>& events,
                      const std::string& path) {
  std::string buf = "sample_index,condition,correct\n";
  for (const StimulusEvent& ev : events) {
    if (ev.condition.find_first_of(",\n") != std::string::npos) {
      throw_error(ErrorKind::invalid_argument,
                  "event condition must not contain ',' or newline");
    }
    buf += std::to_string(ev.sample_index);
    buf += ',';
    buf += ev.condition;
    buf += ev.behavioral_correct ? ",1\n" : ",0\n";
  }
  write_text_file(path, buf);
}

std::vector<StimulusEvent> read_events_csv(const std::string& path) {
  const std::string content = read_text_file(path);
  LineReader lines{content};
  std::string_view line;
  std::vector<StimulusEvent> events;
  bool first = true;
  while (lines.next(line)) {
    if (first) {
      first = false;
      if (line == "sample_index,condition,correct") continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 3) fail_io("expected 3 fields per event row", path);
    StimulusEvent ev;
    ev.sample_index = parse_size(fields[0], path);
    ev.condition = fields[1];
    if (fields[2] == "1") {
      ev.behavioral_correct = true;
    } else if (fields[2] == "0") {
      ev.behavioral_correct = false;
    } else {
      fail_io("event correctness must be 0 or 1", path);
    }
    events.push_back(std::move(ev));
  }
  return events;
}

namespace {

void write_matrix_with_header(const json& header,
                              const std::vector<std::vector<double>>& rows,
                              int precision, const std::string& path) {
  std::string buf = header.dump();
  buf += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) buf += ',';
      append_fixed(buf, row[i], precision);
    }
    buf += '\n';
  }
  write_text_file(path, buf);
}

struct HeaderedMatrix {
  json header;
  std::vector<std::vector<double>> rows;
};

HeaderedMatrix read_matrix_with_header(const std::string& path) {
  const std::string content = read_text_file(path);
  LineReader lines{content};
  std::string_view line;
  if (!lines.next(line)) fail_io("empty file", path);
  HeaderedMatrix out;
  try {
    out.header = json::parse(line);
  } catch (const json::exception& e) {
    fail_io(std::string("malformed metadata header (") + e.what() + ")",
            path);
  }
  while (lines.next(line)) {
    std::vector<double> row;
    for (const auto& field : split(line, ',')) {
      row.push_back(parse_double(field, path));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

SamplingMeta meta_from_header(const json& header, const std::string& path) {
  SamplingMeta meta;
  try {
    meta.rate_hz = header.at("rate_hz").get<double>();
    meta.pre_stimulus_samples = header.at("pre_stimulus_samples")
                                    .get<std::size_t>();
    meta.post_stimulus_samples = header.at("post_stimulus_samples")
                                     .get<std::size_t>();
  } catch (const json::exception& e) {
    fail_io(std::string("metadata header missing sampling fields (") +
                e.what() + ")",
            path);
  }
  return meta;
}

std::vector<std::string> channels_from_header(const json& header,
                                              const std::string& path) {
  std::vector<std::string> channels;
  try {
    for (const auto& ch : header.at("channels")) {
      channels.push_back(ch.get<std::string>());
    }
  } catch (const json::exception& e) {
    fail_io(std::string("metadata header missing channels (") + e.what() +
                ")",
            path);
  }
  return channels;
}

}  // namespace

void write_epoch_csv(const Epoch& epoch, const std::string& path) {
  epoch.validate();
  json header;
  header["type"] = "epoch";
  header["rate_hz"] = epoch.meta.rate_hz;
  header["pre_stimulus_samples"] = epoch.meta.pre_stimulus_samples;
  header["post_stimulus_samples"] = epoch.meta.post_stimulus_samples;
  header["channels"] = epoch.channels;
  header["condition"] = epoch.condition;
  header["behavioral_correct"] = epoch.behavioral_correct;
  write_matrix_with_header(header, epoch.channel_values, 4, path);
}

Epoch read_epoch_csv(const std::string& path) {
  const HeaderedMatrix data = read_matrix_with_header(path);
  Epoch epoch;
  epoch.meta = meta_from_header(data.header, path);
  epoch.channels = channels_from_header(data.header, path);
  try {
    epoch.condition = data.header.at("condition").get<std::string>();
    epoch.behavioral_correct = data.header.at("behavioral_correct")
                                   .get<bool>();
  } catch (const json::exception& e) {
    fail_io(std::string("metadata header missing trial fields (") +
                e.what() + ")",
            path);
  }
  epoch.channel_values = data.rows;
  try {
    epoch.validate();
  } catch (const Error& e) {
    fail_io(std::string("inconsistent epoch file (") + e.what() + ")", path);
  }
  return epoch;
}

void write_erp_csv(const ErpAverage& erp, const std::string& path) {
  json header;
  header["type"] = "erp";
  header["rate_hz"] = erp.meta.rate_hz;
  header["pre_stimulus_samples"] = erp.meta.pre_stimulus_samples;
  header["post_stimulus_samples"] = erp.meta.post_stimulus_samples;
  header["channels"] = erp.channels;
  header["n_trials"] = erp.n_trials;
  header["subject_id"] = erp.subject_id;
  header["class_label"] = to_string(erp.class_label);
  write_matrix_with_header(header, erp.channel_values, 6, path);
}

ErpAverage read_erp_csv(const std::string& path) {
  const HeaderedMatrix data = read_matrix_with_header(path);
  ErpAverage erp;
  erp.meta = meta_from_header(data.header, path);
  erp.channels = channels_from_header(data.header, path);
  try {
    erp.n_trials = data.header.at("n_trials").get<std::size_t>();
    erp.subject_id = data.header.at("subject_id").get<std::string>();
    erp.class_label = class_label_from_string(
        data.header.at("class_label").get<std::string>());
  } catch (const json::exception& e) {
    fail_io(std::string("metadata header missing subject fields (") +
                e.what() + ")",
            path);
  }
  erp.channel_values = data.rows;
  if (erp.channel_values.size() != erp.channels.size()) {
    fail_io("channel row count does not match the channel list", path);
  }
  for (const auto& row : erp.channel_values) {
    if (row.size() != erp.meta.epoch_samples()) {
      fail_io("channel row length does not match the epoch geometry", path);
    }
  }
  return erp;
}

FeatureTable feature_table_from_vectors(
    const std::vector<FeatureVector>& vectors) {
  if (vectors.empty()) {
    throw_error(ErrorKind::empty_input, "no feature vectors");
  }
  FeatureTable table;
  table.columns = vectors[0].layout;
  for (const FeatureVector& v : vectors) {
    if (v.layout.size() != table.columns.size()) {
      throw_error(ErrorKind::shape, "feature vectors disagree on layout");
    }
    for (std::size_t i = 0; i < v.layout.size(); ++i) {
      if (v.layout[i].electrode != table.columns[i].electrode ||
          v.layout[i].feature != table.columns[i].feature) {
        throw_error(ErrorKind::shape, "feature vectors disagree on layout");
      }
    }
    table.subject_ids.push_back(v.subject_id);
    table.labels.push_back(v.class_label);
    table.matrix.push_back(v.values);
  }
  return table;
}

void write_feature_matrix_csv(const FeatureTable& table,
                              const std::string& path) {
  std::string buf = "subject_id,class_label";
  for (const ColumnRef& col : table.columns) {
    buf += ',';
    buf += col.electrode;
    buf += ':';
    buf += col.feature;
  }
  buf += '\n';
  for (std::size_t r = 0; r < table.matrix.size(); ++r) {
    buf += table.subject_ids[r];
    buf += ',';
    buf += to_string(table.labels[r]);
    for (double v : table.matrix[r]) {
      buf += ',';
      append_number(buf, v);
    }
    buf += '\n';
  }
  write_text_file(path, buf);
}

FeatureTable read_feature_matrix_csv(const std::string& path) {
  const std::string content = read_text_file(path);
  LineReader lines{content};
  std::string_view line;
  if (!lines.next(line)) fail_io("empty feature matrix", path);
  const auto header = split(line, ',');
  if (header.size() < 3 || header[0] != "subject_id" ||
      header[1] != "class_label") {
    fail_io("expected subject_id,class_label,... header", path);
  }
  FeatureTable table;
  for (std::size_t i = 2; i < header.size(); ++i) {
    const std::size_t colon = header[i].find(':');
    if (colon == std::string::npos) {
      fail_io("feature column name lacks an electrode prefix: " + header[i],
              path);
    }
    table.columns.push_back(
        {header[i].substr(0, colon), header[i].substr(colon + 1)});
  }
  while (lines.next(line)) {
    const auto fields = split(line, ',');
    if (fields.size() != table.columns.size() + 2) {
      fail_io("feature row width does not match the header", path);
    }
    table.subject_ids.push_back(fields[0]);
    try {
      table.labels.push_back(class_label_from_string(fields[1]));
    } catch (const Error& e) {
      fail_io(e.what(), path);
    }
    std::vector<double> row;
    row.reserve(table.columns.size());
    for (std::size_t i = 2; i < fields.size(); ++i) {
      row.push_back(parse_double(fields[i], path));
    }
    table.matrix.push_back(std::move(row));
  }
  if (table.matrix.empty()) fail_io("feature matrix has no rows", path);
  return table;
}

void write_weights_csv(const WeightVector& weights,
                       const std::vector<ColumnRef>& columns,
                       const std::string& path) {
  if (weights.weights.size() != columns.size()) {
    throw_error(ErrorKind::shape,
                "weight count does not match column count");
  }
  std::vector<std::size_t> order(columns.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&weights](std::size_t a, std::size_t b) {
                     return weights.weights[a] > weights.weights[b];
                   });
  std::string buf = "feature_index,electrode,feature_name,weight\n";
  for (std::size_t idx : order) {
    buf += std::to_string(idx);
    buf += ',';
    buf += columns[idx].electrode;
    buf += ',';
    buf += columns[idx].feature;
    buf += ',';
    append_number(buf, weights.weights[idx]);
    buf += '\n';
  }
  write_text_file(path, buf);
}

std::vector<WeightRow> read_weights_csv(const std::string& path) {
  const std::string content = read_text_file(path);
  LineReader lines{content};
  std::string_view line;
  if (!lines.next(line) ||
      line != "feature_index,electrode,feature_name,weight") {
    fail_io("expected a weights header", path);
  }
  std::vector<WeightRow> rows;
  while (lines.next(line)) {
    const auto fields = split(line, ',');
    if (fields.size() != 4) fail_io("expected 4 fields per weight row", path);
    WeightRow row;
    row.feature_index = parse_size(fields[0], path);
    row.electrode = fields[1];
    row.feature_name = fields[2];
    row.weight = parse_double(fields[3], path);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_layout_csv(const ElectrodeLayout& layout,
                      const std::string& path) {
  layout.validate();
  std::string buf = "label,x,y,hemisphere,region\n";
  for (const ElectrodeSite& site : layout.sites) {
    buf += site.label;
    buf += ',';
    append_fixed(buf, site.x, 4);
    buf += ',';
    append_fixed(buf, site.y, 4);
    buf += ',';
    buf += to_string(site.hemisphere);
    buf += ',';
    buf += to_string(site.region);
    buf += '\n';
  }
  write_text_file(path, buf);
}

ElectrodeLayout read_layout_csv(const std::string& path) {
  const std::string content = read_text_file(path);
  LineReader lines{content};
  std::string_view line;
  if (!lines.next(line) || line != "label,x,y,hemisphere,region") {
    fail_io("expected a layout header", path);
  }
  ElectrodeLayout layout;
  while (lines.next(line)) {
    const auto fields = split(line, ',');
    if (fields.size() != 5) fail_io("expected 5 fields per layout row", path);
    ElectrodeSite site;
    site.label = fields[0];
    site.x = parse_double(fields[1], path);
    site.y = parse_double(fields[2], path);
    try {
      site.hemisphere = hemisphere_from_string(fields[3]);
      site.region = region_from_string(fields[4]);
    } catch (const Error& e) {
      fail_io(e.what(), path);
    }
    layout.sites.push_back(std::move(site));
  }
  try {
    layout.validate();
  } catch (const Error& e) {
    fail_io(std::string("inconsistent layout (") + e.what() + ")", path);
  }
  return layout;
}

void write_registry_csv(const FeatureRegistry& registry,
                        const std::string& path) {
  validate_registry(registry);
  std::string buf = "name,kind,part,window_start_ms,window_end_ms,params\n";
  for (const FeatureDescriptor& d : registry) {
    buf += d.name;
    buf += ',';
    buf += d.kind;
    buf += ',';
    buf += to_string(d.part);
    buf += ',';
    if (d.window) {
      append_number(buf, d.window->start_ms);
      buf += ',';
      append_number(buf, d.window->end_ms);
    } else {
      buf += ',';
    }
    buf += ',';
    bool first = true;
    for (const auto& [key, value] : d.params) {
      if (!first) buf += ';';
      first = false;
      buf += key;
      buf += '=';
      append_number(buf, value);
    }
    buf += '\n';
  }
  write_text_file(path, buf);
}

FeatureRegistry read_registry_csv(const std::string& path) {
  const std::string content = read_text_file(path);
  LineReader lines{content};
  std::string_view line;
  if (!lines.next(line) ||
      line != "name,kind,part,window_start_ms,window_end_ms,params") {
    fail_io("expected a registry header", path);
  }
  FeatureRegistry registry;
  while (lines.next(line)) {
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      fail_io("expected 6 fields per registry row", path);
    }
    FeatureDescriptor d;
    d.name = fields[0];
    d.kind = fields[1];
    try {
      d.part = signal_part_from_string(fields[2]);
    } catch (const Error& e) {
      fail_io(e.what(), path);
    }
    if (fields[3].empty() != fields[4].empty()) {
      fail_io("window needs both start and end", path);
    }
    if (!fields[3].empty()) {
      d.window = TimeWindow{parse_double(fields[3], path),
                            parse_double(fields[4], path)};
    }
    if (!fields[5].empty()) {
      for (const auto& pair : split(fields[5], ';')) {
        const std::size_t eq = pair.find('=');
        if (eq == std::string::npos) {
          fail_io("malformed parameter '" + pair + "'", path);
        }
        d.params[pair.substr(0, eq)] =
            parse_double(std::string_view(pair).substr(eq + 1), path);
      }
    }
    registry.push_back(std::move(d));
  }
  try {
    validate_registry(registry);
  } catch (const Error& e) {
    fail_io(std::string("invalid registry (") + e.what() + ")", path);
  }
  return registry;
}

void write_model_json(const TrainedModel& model, const std::string& path) {
  json doc;
  doc["type"] = "model";
  doc["kernel"] = to_string(model.kernel.kind);
  doc["gamma"] = model.kernel.gamma;
  doc["regularization_c"] = model.regularization_c;
  doc["bias"] = model.bias;
  doc["feature_subset"] = model.feature_subset;
  doc["feature_means"] = model.feature_means;
  doc["feature_scales"] = model.feature_scales;
  doc["support_coefficients"] = model.support_coefficients;
  doc["support_samples"] = model.support_samples;
  write_text_file(path, doc.dump(2) + "\n");
}

TrainedModel read_model_json(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail_io(std::string("malformed model file (") + e.what() + ")", path);
  }
  TrainedModel model;
  try {
    model.kernel.kind =
        kernel_kind_from_string(doc.at("kernel").get<std::string>());
    model.kernel.gamma = doc.at("gamma").get<double>();
    model.regularization_c = doc.at("regularization_c").get<double>();
    model.bias = doc.at("bias").get<double>();
    model.feature_subset =
        doc.at("feature_subset").get<std::vector<std::size_t>>();
    model.feature_means =
        doc.at("feature_means").get<std::vector<double>>();
    model.feature_scales =
        doc.at("feature_scales").get<std::vector<double>>();
    model.support_coefficients =
        doc.at("support_coefficients").get<std::vector<double>>();
    model.support_samples =
        doc.at("support_samples").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    fail_io(std::string("model file missing fields (") + e.what() + ")",
            path);
  } catch (const Error& e) {
    fail_io(e.what(), path);
  }
  const std::size_t d = model.feature_subset.size();
  if (model.feature_means.size() != d || model.feature_scales.size() != d ||
      model.support_coefficients.size() != model.support_samples.size()) {
    fail_io("model fields have inconsistent sizes", path);
  }
  for (const auto& row : model.support_samples) {
    if (row.size() != d) fail_io("support sample width mismatch", path);
  }
  return model;
}

void write_confusion_csv(const ConfusionReport& report,
                         const std::string& path) {
  std::string buf =
      "repeat,true_regular_pred_regular,true_regular_pred_dyslexic,"
      "true_dyslexic_pred_regular,true_dyslexic_pred_dyslexic,"
      "pct_true_regular_pred_regular,pct_true_regular_pred_dyslexic,"
      "pct_true_dyslexic_pred_regular,pct_true_dyslexic_pred_dyslexic\n";
  for (std::size_t rep = 0; rep < report.per_repeat.size(); ++rep) {
    const ConfusionCounts& cm = report.per_repeat[rep];
    buf += std::to_string(rep);
    for (int t = 0; t < 2; ++t) {
      for (int p = 0; p < 2; ++p) {
        buf += ',';
        buf += std::to_string(cm[t][p]);
      }
    }
    for (int t = 0; t < 2; ++t) {
      const double row_total = static_cast<double>(cm[t][0] + cm[t][1]);
      for (int p = 0; p < 2; ++p) {
        buf += ',';
        append_fixed(buf,
                     row_total > 0.0
                         ? 100.0 * static_cast<double>(cm[t][p]) / row_total
                         : 0.0,
                     4);
      }
    }
    buf += '\n';
  }
  write_text_file(path, buf);
}

}  // namespace erp
