#include "erp/config.hpp"

#include <charconv>
#include <string_view>
#include <system_error>

#include "erp/errors.hpp"
#include "erp/io.hpp"

namespace erp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line_no,
                       const std::string& message) {
  throw_error(ErrorKind::config,
              origin + ":" + std::to_string(line_no) + ": " + message);
}

struct Field {
  std::string name;  // "section.key" for error messages
  std::string value;
  std::string origin;
  std::size_t line_no;

  [[noreturn]] void invalid(const std::string& why) const {
    fail(origin, line_no, "invalid value for " + name + ": " + why);
  }

  double as_double() const {
    const std::string_view s(value);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      invalid("expected a number, got '" + value + "'");
    }
    return v;
  }

  std::uint64_t as_uint() const {
    const std::string_view s(value);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      invalid("expected a nonnegative integer, got '" + value + "'");
    }
    return v;
  }

  std::size_t as_positive() const {
    const std::uint64_t v = as_uint();
    if (v == 0) invalid("must be positive");
    return static_cast<std::size_t>(v);
  }
};

std::vector<std::size_t> parse_size_list(const Field& f) {
  std::vector<std::size_t> out;
  std::string_view rest(f.value);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item =
        trim(comma == std::string_view::npos ? rest : rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{}
                                           : rest.substr(comma + 1);
    std::size_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(),
                                     v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size() ||
        v == 0) {
      f.invalid("expected comma-separated positive integers");
    }
    out.push_back(v);
  }
  if (out.empty()) f.invalid("list is empty");
  return out;
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text,
                                 const std::string& origin) {
  PipelineConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  std::string_view rest(text);
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view raw =
        nl == std::string_view::npos ? rest : rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{}
                                        : rest.substr(nl + 1);
    line_no++;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "unterminated section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "paths" && section != "features" &&
          section != "preprocess" && section != "wavelet" &&
          section != "select" && section != "classifier" &&
          section != "evaluate" && section != "synth") {
        fail(origin, line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(origin, line_no, "expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    Field f{section.empty() ? key : section + "." + key,
            std::string(trim(line.substr(eq + 1))), origin, line_no};
    if (key.empty()) fail(origin, line_no, "empty key");

    if (section.empty()) {
      if (key == "seed") {
        cfg.seed = f.as_uint();
      } else {
        fail(origin, line_no, "unknown key '" + key + "' outside sections");
      }
    } else if (section == "paths") {
      if (key == "input_dir") {
        cfg.input_dir = f.value;
      } else if (key == "work_dir") {
        cfg.work_dir = f.value;
      } else if (key == "output_dir") {
        cfg.output_dir = f.value;
      } else if (key == "layout") {
        cfg.layout_path = f.value;
      } else {
        fail(origin, line_no, "unknown key '" + f.name + "'");
      }
    } else if (section == "features") {
      if (key == "registry") {
        cfg.registry_path = f.value;
      } else {
        fail(origin, line_no, "unknown key '" + f.name + "'");
      }
    } else if (section == "preprocess") {
      if (key == "band_lo_hz") {
        cfg.band_lo_hz = f.as_double();
      } else if (key == "band_hi_hz") {
        cfg.band_hi_hz = f.as_double();
      } else if (key == "decimation") {
        cfg.decimation = f.as_positive();
      } else if (key == "rejection_threshold_uv") {
        cfg.rejection_threshold_uv = f.as_double();
        if (!(cfg.rejection_threshold_uv > 0.0)) f.invalid("must be > 0");
      } else {
        fail(origin, line_no, "unknown key '" + f.name + "'");
      }
    } else if (section == "wavelet") {
      if (key == "levels") {
        cfg.wavelet_levels = f.as_positive();
      } else if (key == "boundary") {
        try {
          cfg.boundary = boundary_mode_from_string(f.value);
        } catch (const Error& e) {
          f.invalid(e.what());
        }
      } else {
        fail(origin, line_no, "unknown key '" + f.name + "'");
      }
    } else if (section == "select") {
      if (key == "relieff_k") {
        cfg.relieff_k = f.as_positive();
      } else if (key == "sizes") {
        cfg.selection_sizes = parse_size_list(f);
      } else {
        fail(origin, line_no, "unknown key '" + f.name + "'");
      }
    } else if (section == "classifier") {
      if (key == "kernel") {
        try {
          cfg.kernel.kind = kernel_kind_from_string(f.value);
        } catch (const Error& e) {
          f.invalid(e.what());
        }
      } else if (key == "gamma") {
        cfg.kernel.gamma = f.as_double();
        if (!(cfg.kernel.gamma > 0.0)) f.invalid("must be > 0");
      } else if (key == "c") {
        cfg.regularization_c = f.as_double();
        if (!(cfg.regularization_c > 0.0)) f.invalid("must be > 0");
      } else {
        fail(origin, line_no, "unknown key '" + f.name + "'");
      }
    } else if (section == "evaluate") {
      if (key == "scheme") {
        try {
          cfg.scheme = cv_scheme_from_string(f.value);
        } catch (const Error& e) {
          f.invalid(e.what());
        }
      } else if (key == "folds") {
        cfg.folds = f.as_positive();
        if (cfg.folds < 2) f.invalid("need at least two folds");
      } else if (key == "repeats") {
        cfg.repeats = f.as_positive();
      } else {
        fail(origin, line_no, "unknown key '" + f.name + "'");
      }
    } else if (section == "synth") {
      if (key == "scenario") {
        cfg.scenario = f.value;
      } else if (key == "subjects_per_class") {
        cfg.synth_subjects_per_class = f.as_positive();
      } else if (key == "trials_per_subject") {
        cfg.synth_trials_per_subject = f.as_positive();
      } else if (key == "pink_noise_uv") {
        cfg.synth_pink_noise_uv = f.as_double();
        if (cfg.synth_pink_noise_uv < 0.0) f.invalid("must be >= 0");
      } else if (key == "trial_jitter_sd_ms") {
        cfg.synth_trial_jitter_sd_ms = f.as_double();
        if (cfg.synth_trial_jitter_sd_ms < 0.0) f.invalid("must be >= 0");
      } else if (key == "behavioral_error_rate") {
        cfg.synth_behavioral_error_rate = f.as_double();
        if (cfg.synth_behavioral_error_rate < 0.0 ||
            cfg.synth_behavioral_error_rate > 1.0) {
          f.invalid("must lie in [0, 1]");
        }
      } else {
        fail(origin, line_no, "unknown key '" + f.name + "'");
      }
    }
  }

  if (!(cfg.band_lo_hz >= 0.0) || !(cfg.band_lo_hz < cfg.band_hi_hz)) {
    throw_error(ErrorKind::config,
                origin + ": preprocess band edges must satisfy 0 <= lo < hi");
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw_error(ErrorKind::config, e.what());
  }
  return parse_config_text(text, path);
}

}  // namespace erp
