#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "erp/features.hpp"
#include "erp/relieff.hpp"

namespace erp {

enum class Hemisphere { left, right, midline };
enum class Region { anterior, central, posterior };

const char* to_string(Hemisphere h);
const char* to_string(Region r);
Hemisphere hemisphere_from_string(const std::string& s);
Region region_from_string(const std::string& s);

struct ElectrodeSite {
  std::string label;
  double x = 0.0;  // unit head circle, +x toward the right ear
  double y = 0.0;  // +y toward the nose
  Hemisphere hemisphere = Hemisphere::midline;
  Region region = Region::central;
};

struct ElectrodeLayout {
  std::vector<ElectrodeSite> sites;

  const ElectrodeSite* find(const std::string& label) const;
  std::vector<std::string> labels() const;

  // Unique labels; left sites have x < 0, right sites x > 0, midline x == 0.
  void validate() const;

  // 64-channel 10-10 montage with schematic disk coordinates. Hemisphere
  // comes from the label suffix (odd = left, even = right, z = midline),
  // region from the prefix (Fp/AF/F anterior; FT/FC/C/T/TP/CP central;
  // P/PO/O/I posterior).
  static const ElectrodeLayout& standard_64();
};

// Classifies a 10-10 label by its spelling alone.
Hemisphere hemisphere_of_label(const std::string& label);
Region region_of_label(const std::string& label);

struct SelectionShare {
  std::size_t count = 0;
  double weight_sum = 0.0;
};

// Tally of selected features per electrode. Keyed map keeps iteration
// deterministic.
using ElectrodeShares = std::map<std::string, SelectionShare>;

ElectrodeShares attribute_selection(
    const std::vector<std::size_t>& selected,
    const std::vector<ColumnRef>& layout_of_vector,
    const WeightVector& weights);

struct RegionReport {
  ElectrodeShares per_electrode;
  // cells[hemisphere][region]
  std::array<std::array<SelectionShare, 3>, 3> cells{};
  double asymmetry_index = 0.0;  // (L - R)/(L + R) over counts, 0 if L+R=0
  std::size_t total_count = 0;
};

RegionReport aggregate_regions(const ElectrodeShares& per_electrode,
                               const ElectrodeLayout& layout);

// Plain-text per-electrode and per-region tables plus the asymmetry index.
std::string render_region_report(const RegionReport& report,
                                 const ElectrodeLayout& layout);

// Writes a deterministic SVG head diagram: one circle per electrode, fill
// intensity proportional to its selection count, selected electrodes
// outlined.
void render_scalp_map(const RegionReport& report,
                      const ElectrodeLayout& layout,
                      const std::string& out_path);

}  // namespace erp
