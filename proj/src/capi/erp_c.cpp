#include "erp/erp.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "erp/config.hpp"
#include "erp/errors.hpp"
#include "erp/pipeline.hpp"
#include "erp/relieff.hpp"
#include "erp/signal_core.hpp"
#include "erp/wavelet.hpp"

namespace {

thread_local std::string tls_error;

erp_status status_of(erp::ErrorKind kind) {
  using erp::ErrorKind;
  switch (kind) {
    case ErrorKind::invalid_argument:
      return ERP_ERROR_INVALID_ARGUMENT;
    case ErrorKind::length:
    case ErrorKind::shape:
    case ErrorKind::empty_input:
    case ErrorKind::undefined_input:
    case ErrorKind::insufficient_structure:
      return ERP_ERROR_DATA;
    case ErrorKind::convergence:
      return ERP_ERROR_NUMERIC;
    case ErrorKind::config:
      return ERP_ERROR_CONFIG;
    case ErrorKind::io:
      return ERP_ERROR_IO;
    case ErrorKind::internal:
      return ERP_ERROR_INTERNAL;
  }
  return ERP_ERROR_INTERNAL;
}

// Runs `fn` with exceptions translated to status codes; the message lands
// in `sink` (cleared on success).
template <typename Fn>
erp_status guarded(std::string& sink, Fn&& fn) {
  try {
    fn();
    sink.clear();
    return ERP_OK;
  } catch (const erp::Error& e) {
    sink = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    sink = "out of memory";
    return ERP_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    sink = e.what();
    return ERP_ERROR_INTERNAL;
  } catch (...) {
    sink = "unknown error";
    return ERP_ERROR_INTERNAL;
  }
}

erp_status invalid(std::string& sink, const char* message) {
  sink = message;
  return ERP_ERROR_INVALID_ARGUMENT;
}

}  // namespace

struct erp_pipeline {
  erp::PipelineConfig cfg;
  erp::RunOptions opts;
  std::string last_error;
};

extern "C" {

const char* erp_version(void) { return erp::kToolVersion; }

const char* erp_status_name(erp_status status) {
  switch (status) {
    case ERP_OK: return "ok";
    case ERP_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case ERP_ERROR_DATA: return "data";
    case ERP_ERROR_CONFIG: return "config";
    case ERP_ERROR_IO: return "io";
    case ERP_ERROR_NUMERIC: return "numeric";
    case ERP_ERROR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* erp_last_error(void) { return tls_error.c_str(); }

erp_status erp_pipeline_create(const char* config_path, erp_pipeline** out) {
  if (out == nullptr) return invalid(tls_error, "null output handle");
  *out = nullptr;
  if (config_path == nullptr) {
    return invalid(tls_error, "null configuration path");
  }
  return guarded(tls_error, [&] {
    auto handle = std::make_unique<erp_pipeline>();
    handle->cfg = erp::load_config(config_path);
    *out = handle.release();
  });
}

erp_status erp_pipeline_set_seed(erp_pipeline* p, uint64_t seed) {
  if (p == nullptr) return invalid(tls_error, "null pipeline handle");
  p->opts.seed_override = seed;
  p->last_error.clear();
  return ERP_OK;
}

erp_status erp_pipeline_set_leaky(erp_pipeline* p, int leaky) {
  if (p == nullptr) return invalid(tls_error, "null pipeline handle");
  p->opts.leaky = leaky != 0;
  p->last_error.clear();
  return ERP_OK;
}

erp_status erp_pipeline_set_stage_dir(erp_pipeline* p, const char* dir) {
  if (p == nullptr) return invalid(tls_error, "null pipeline handle");
  if (dir == nullptr) {
    p->opts.stage_dir_override.reset();
  } else if (dir[0] == '\0') {
    return invalid(p->last_error, "stage directory must not be empty");
  } else {
    p->opts.stage_dir_override = dir;
  }
  p->last_error.clear();
  return ERP_OK;
}

erp_status erp_pipeline_run_stage(erp_pipeline* p, const char* stage_name) {
  if (p == nullptr) return invalid(tls_error, "null pipeline handle");
  if (stage_name == nullptr) {
    return invalid(p->last_error, "null stage name");
  }
  return guarded(p->last_error, [&] {
    erp::Pipeline pipeline(p->cfg, p->opts);
    pipeline.run_stage(erp::stage_from_string(stage_name));
  });
}

erp_status erp_pipeline_run_all(erp_pipeline* p) {
  if (p == nullptr) return invalid(tls_error, "null pipeline handle");
  return guarded(p->last_error, [&] {
    erp::Pipeline pipeline(p->cfg, p->opts);
    pipeline.run_all();
  });
}

const char* erp_pipeline_last_error(const erp_pipeline* p) {
  return p == nullptr ? "" : p->last_error.c_str();
}

void erp_pipeline_destroy(erp_pipeline* p) { delete p; }

erp_status erp_bandpass_filter(const double* input, size_t n,
                               double rate_hz, double lo_hz, double hi_hz,
                               double* output) {
  if ((input == nullptr || output == nullptr) && n > 0) {
    return invalid(tls_error, "null buffer");
  }
  return guarded(tls_error, [&] {
    const std::vector<double> x(input, input + n);
    const std::vector<double> y =
        erp::bandpass_filter(x, rate_hz, lo_hz, hi_hz);
    std::memcpy(output, y.data(), y.size() * sizeof(double));
  });
}

erp_status erp_decimate(const double* input, size_t n, double rate_hz,
                        size_t factor, double* output, size_t* output_n,
                        double* output_rate_hz) {
  if (output_n == nullptr || output_rate_hz == nullptr) {
    return invalid(tls_error, "null output size or rate pointer");
  }
  if ((input == nullptr || output == nullptr) && n > 0) {
    return invalid(tls_error, "null buffer");
  }
  return guarded(tls_error, [&] {
    const std::vector<double> x(input, input + n);
    const erp::DecimateResult r = erp::decimate(x, rate_hz, factor);
    std::memcpy(output, r.samples.data(), r.samples.size() * sizeof(double));
    *output_n = r.samples.size();
    *output_rate_hz = r.rate_hz;
  });
}

erp_status erp_wavelet_split(const double* input, size_t n, size_t levels,
                             int symmetric_boundary, double* lowpass_out,
                             double* highpass_out) {
  if ((input == nullptr || lowpass_out == nullptr ||
       highpass_out == nullptr) &&
      n > 0) {
    return invalid(tls_error, "null buffer");
  }
  return guarded(tls_error, [&] {
    const std::vector<double> x(input, input + n);
    const erp::LpHp split = erp::split_signal(
        x, levels, erp::WaveletFilterPair::daubechies4(),
        symmetric_boundary != 0 ? erp::BoundaryMode::symmetric
                                : erp::BoundaryMode::periodic);
    std::memcpy(lowpass_out, split.lp.data(),
                split.lp.size() * sizeof(double));
    std::memcpy(highpass_out, split.hp.data(),
                split.hp.size() * sizeof(double));
  });
}

erp_status erp_relieff_weights(const double* matrix, const int* labels,
                               size_t n_samples, size_t n_features,
                               size_t k_neighbors, double* weights_out) {
  if ((matrix == nullptr || labels == nullptr || weights_out == nullptr) &&
      n_samples > 0) {
    return invalid(tls_error, "null buffer");
  }
  return guarded(tls_error, [&] {
    std::vector<std::vector<double>> rows(n_samples);
    for (size_t i = 0; i < n_samples; ++i) {
      rows[i].assign(matrix + i * n_features,
                     matrix + (i + 1) * n_features);
    }
    const std::vector<int> label_vec(labels, labels + n_samples);
    const erp::LabeledDataset ds =
        erp::LabeledDataset::from_matrix(std::move(rows), label_vec);
    const erp::WeightVector w = erp::relieff_weights(ds, k_neighbors);
    std::memcpy(weights_out, w.weights.data(),
                w.weights.size() * sizeof(double));
  });
}

}  // extern "C"
