#include "erp/roi.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "erp/errors.hpp"

namespace erp {

const char* to_string(Hemisphere h) {
  switch (h) {
    case Hemisphere::left: return "left";
    case Hemisphere::right: return "right";
    case Hemisphere::midline: return "midline";
  }
  return "?";
}

const char* to_string(Region r) {
  switch (r) {
    case Region::anterior: return "anterior";
    case Region::central: return "central";
    case Region::posterior: return "posterior";
  }
  return "?";
}

Hemisphere hemisphere_from_string(const std::string& s) {
  if (s == "left") return Hemisphere::left;
  if (s == "right") return Hemisphere::right;
  if (s == "midline") return Hemisphere::midline;
  throw_error(ErrorKind::config, "unknown hemisphere: " + s);
}

Region region_from_string(const std::string& s) {
  if (s == "anterior") return Region::anterior;
  if (s == "central") return Region::central;
  if (s == "posterior") return Region::posterior;
  throw_error(ErrorKind::config, "unknown region: " + s);
}

Hemisphere hemisphere_of_label(const std::string& label) {
  if (label.empty()) {
    throw_error(ErrorKind::invalid_argument, "empty electrode label");
  }
  if (label.back() == 'z') return Hemisphere::midline;
  std::size_t digit = label.size();
  while (digit > 0 && std::isdigit(static_cast<unsigned char>(
                          label[digit - 1]))) {
    digit--;
  }
  if (digit == label.size()) {
    throw_error(ErrorKind::invalid_argument,
                "electrode label has no position suffix: " + label);
  }
  const int number = std::stoi(label.substr(digit));
  return number % 2 == 1 ? Hemisphere::left : Hemisphere::right;
}

Region region_of_label(const std::string& label) {
  std::size_t end = label.size();
  while (end > 0 && (std::isdigit(static_cast<unsigned char>(
                         label[end - 1])) ||
                     label[end - 1] == 'z')) {
    end--;
  }
  const std::string prefix = label.substr(0, end);
  if (prefix == "Fp" || prefix == "AF" || prefix == "F") {
    return Region::anterior;
  }
  if (prefix == "FT" || prefix == "FC" || prefix == "C" || prefix == "T" ||
      prefix == "TP" || prefix == "CP") {
    return Region::central;
  }
  if (prefix == "P" || prefix == "PO" || prefix == "O" || prefix == "I") {
    return Region::posterior;
  }
  throw_error(ErrorKind::invalid_argument,
              "electrode label has unknown prefix: " + label);
}

const ElectrodeSite* ElectrodeLayout::find(const std::string& label) const {
  for (const ElectrodeSite& site : sites) {
    if (site.label == label) return &site;
  }
  return nullptr;
}

std::vector<std::string> ElectrodeLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(sites.size());
  for (const ElectrodeSite& site : sites) out.push_back(site.label);
  return out;
}

void ElectrodeLayout::validate() const {
  if (sites.empty()) throw_error(ErrorKind::empty_input, "empty layout");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      if (sites[i].label == sites[j].label) {
        throw_error(ErrorKind::invalid_argument,
                    "duplicate electrode label: " + sites[i].label);
      }
    }
    const ElectrodeSite& s = sites[i];
    const bool ok = (s.hemisphere == Hemisphere::midline && s.x == 0.0) ||
                    (s.hemisphere == Hemisphere::left && s.x < 0.0) ||
                    (s.hemisphere == Hemisphere::right && s.x > 0.0);
    if (!ok) {
      throw_error(ErrorKind::invalid_argument,
                  "electrode position contradicts its hemisphere: " +
                      s.label);
    }
  }
}

const ElectrodeLayout& ElectrodeLayout::standard_64() {
  static const ElectrodeLayout layout = [] {
    struct Row {
      double y;
      std::vector<std::string> labels;  // listed left to right
    };
    const std::vector<Row> rows = {
        {0.85, {"Fp1", "Fpz", "Fp2"}},
        {0.68, {"AF7", "AF3", "AFz", "AF4", "AF8"}},
        {0.50, {"F7", "F5", "F3", "F1", "Fz", "F2", "F4", "F6", "F8"}},
        {0.25,
         {"FT7", "FC5", "FC3", "FC1", "FCz", "FC2", "FC4", "FC6", "FT8"}},
        {0.00, {"T7", "C5", "C3", "C1", "Cz", "C2", "C4", "C6", "T8"}},
        {-0.25,
         {"TP7", "CP5", "CP3", "CP1", "CPz", "CP2", "CP4", "CP6", "TP8"}},
        {-0.50,
         {"P9", "P7", "P5", "P3", "P1", "Pz", "P2", "P4", "P6", "P8",
          "P10"}},
        {-0.68, {"PO7", "PO3", "POz", "PO4", "PO8"}},
        {-0.85, {"O1", "Oz", "O2"}},
        {-0.98, {"Iz"}},
    };
    ElectrodeLayout out;
    for (const Row& row : rows) {
      const std::size_t k = row.labels.size();
      // Spread each row across the chord of the head circle at its
      // height, leaving a margin so markers stay inside the outline.
      const double half_width =
          0.92 * std::sqrt(std::max(0.0, 1.0 - row.y * row.y));
      for (std::size_t i = 0; i < k; ++i) {
        ElectrodeSite site;
        site.label = row.labels[i];
        site.hemisphere = hemisphere_of_label(site.label);
        site.region = region_of_label(site.label);
        double rank = 0.0;
        if (k > 1) {
          rank = (2.0 * static_cast<double>(i) -
                  static_cast<double>(k - 1)) /
                 static_cast<double>(k - 1);
        }
        site.x = site.hemisphere == Hemisphere::midline
                     ? 0.0
                     : rank * half_width;
        site.y = row.y;
        out.sites.push_back(site);
      }
    }
    out.validate();
    return out;
  }();
  return layout;
}

ElectrodeShares attribute_selection(
    const std::vector<std::size_t>& selected,
    const std::vector<ColumnRef>& layout_of_vector,
    const WeightVector& weights) {
  if (weights.weights.size() != layout_of_vector.size()) {
    throw_error(ErrorKind::shape,
                "weight count does not match vector layout");
  }
  ElectrodeShares shares;
  for (std::size_t idx : selected) {
    if (idx >= layout_of_vector.size()) {
      throw_error(ErrorKind::invalid_argument,
                  "selected feature index out of range");
    }
    SelectionShare& share = shares[layout_of_vector[idx].electrode];
    share.count++;
    share.weight_sum += weights.weights[idx];
  }
  return shares;
}

RegionReport aggregate_regions(const ElectrodeShares& per_electrode,
                               const ElectrodeLayout& layout) {
  layout.validate();
  RegionReport report;
  report.per_electrode = per_electrode;
  double left = 0.0;
  double right = 0.0;
  for (const auto& [label, share] : per_electrode) {
    const ElectrodeSite* site = layout.find(label);
    if (site == nullptr) {
      throw_error(ErrorKind::config,
                  "electrode not present in the layout: " + label);
    }
    auto& cell = report.cells[static_cast<int>(site->hemisphere)]
                             [static_cast<int>(site->region)];
    cell.count += share.count;
    cell.weight_sum += share.weight_sum;
    report.total_count += share.count;
    if (site->hemisphere == Hemisphere::left) {
      left += static_cast<double>(share.count);
    } else if (site->hemisphere == Hemisphere::right) {
      right += static_cast<double>(share.count);
    }
  }
  report.asymmetry_index =
      left + right > 0.0 ? (left - right) / (left + right) : 0.0;
  return report;
}

std::string render_region_report(const RegionReport& report,
                                 const ElectrodeLayout& layout) {
  char line[160];
  std::string out;
  out += "per-electrode selection\n";
  out += "electrode  count  weight_sum\n";
  for (const ElectrodeSite& site : layout.sites) {
    const auto it = report.per_electrode.find(site.label);
    if (it == report.per_electrode.end()) continue;
    std::snprintf(line, sizeof line, "%-9s  %5zu  %10.6f\n",
                  site.label.c_str(), it->second.count,
                  it->second.weight_sum);
    out += line;
  }
  out += "\nper-region selection (count / weight_sum)\n";
  std::snprintf(line, sizeof line, "%-9s  %18s  %18s  %18s\n", "",
                "anterior", "central", "posterior");
  out += line;
  const Hemisphere hemis[3] = {Hemisphere::left, Hemisphere::midline,
                               Hemisphere::right};
  for (Hemisphere h : hemis) {
    out += [&] {
      char row[200];
      char cells[3][40];
      for (int r = 0; r < 3; ++r) {
        const auto& cell = report.cells[static_cast<int>(h)][r];
        std::snprintf(cells[r], sizeof cells[r], "%zu / %.6f", cell.count,
                      cell.weight_sum);
      }
      std::snprintf(row, sizeof row, "%-9s  %18s  %18s  %18s\n",
                    to_string(h), cells[0], cells[1], cells[2]);
      return std::string(row);
    }();
  }
  std::snprintf(line, sizeof line, "\nasymmetry index: %.4f\n",
                report.asymmetry_index);
  out += line;
  return out;
}

void render_scalp_map(const RegionReport& report,
                      const ElectrodeLayout& layout,
                      const std::string& out_path) {
  layout.validate();
  std::size_t max_count = 0;
  for (const auto& [label, share] : report.per_electrode) {
    max_count = std::max(max_count, share.count);
  }

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  const double cx = 250.0;
  const double cy = 250.0;
  const double scale = 210.0;

  std::string svg;
  svg +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" "
      "height=\"500\" viewBox=\"0 0 500 500\">\n";
  // Nose and ears first so the head circle overlaps their bases.
  svg += "<polygon points=\"235," + fmt(cy - scale + 6.0) + " 265," +
         fmt(cy - scale + 6.0) + " 250," + fmt(cy - scale - 22.0) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  svg += "<ellipse cx=\"" + fmt(cx - scale - 6.0) +
         "\" cy=\"250\" rx=\"10\" ry=\"26\" fill=\"none\" stroke=\"black\" "
         "stroke-width=\"2\"/>\n";
  svg += "<ellipse cx=\"" + fmt(cx + scale + 6.0) +
         "\" cy=\"250\" rx=\"10\" ry=\"26\" fill=\"none\" stroke=\"black\" "
         "stroke-width=\"2\"/>\n";
  svg += "<circle cx=\"250\" cy=\"250\" r=\"" + fmt(scale) +
         "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";

  for (const ElectrodeSite& site : layout.sites) {
    const double px = cx + site.x * scale;
    const double py = cy - site.y * scale;
    std::size_t count = 0;
    const auto it = report.per_electrode.find(site.label);
    if (it != report.per_electrode.end()) count = it->second.count;
    std::string fill = "#ffffff";
    if (count > 0 && max_count > 0) {
      const double intensity =
          static_cast<double>(count) / static_cast<double>(max_count);
      const int level =
          255 - static_cast<int>(std::lround(205.0 * intensity));
      char color[10];
      std::snprintf(color, sizeof color, "#ff%02x%02x", level, level);
      fill = color;
    }
    const char* stroke = count > 0 ? "#c00000" : "#000000";
    const char* width = count > 0 ? "2.5" : "1";
    svg += "<circle cx=\"" + fmt(px) + "\" cy=\"" + fmt(py) +
           "\" r=\"11\" fill=\"" + fill + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + width + "\"/>\n";
    svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(py + 3.0) +
           "\" font-size=\"8\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">" +
           site.label + "</text>\n";
  }
  svg += "</svg>\n";

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw_error(ErrorKind::io, "cannot write scalp map: " + out_path);
  }
  out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
  if (!out) {
    throw_error(ErrorKind::io, "failed writing scalp map: " + out_path);
  }
}

}  // namespace erp
