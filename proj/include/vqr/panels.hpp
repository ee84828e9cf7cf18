#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <ranges>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vqr/config.hpp"
#include "vqr/corpus.hpp"
#include "vqr/error.hpp"
#include "vqr/ids.hpp"

namespace vqr {

// Lower bounds (inclusive) of the A, B, C and D regions on the world
// percentile scale; everything below `d` is E.
struct GradingCutoffs {
  double a = 90.0;
  double b = 70.0;
  double c = 50.0;
  double d = 20.0;

  void validate(const std::string& where) const {
    if (!(100.0 >= a && a > b && b > c && c > d && d > 0.0))
      throw ConfigError(where + ": grading cutoffs must satisfy 100 >= a > b > c > d > 0");
  }

  friend bool operator==(const GradingCutoffs&, const GradingCutoffs&) = default;
};

// Peer-review corners of the (J, C) square: high citations with a weak
// journal, and low citations with a strong journal.
struct CornerBounds {
  double high_c_min = 90.0;
  double low_j_max = 20.0;
  double low_c_max = 20.0;
  double high_j_min = 90.0;

  friend bool operator==(const CornerBounds&, const CornerBounds&) = default;
};

struct PanelConfig {
  PanelId id;
  std::string name;
  std::map<int, double> slope_by_year;
  GradingCutoffs cutoffs;
  CornerBounds corners;

  std::optional<double> slope(int year) const {
    auto it = slope_by_year.find(year);
    if (it == slope_by_year.end()) return std::nullopt;
    return it->second;
  }
};

class PanelSet {
 public:
  PanelSet() = default;

  void add(PanelConfig panel) {
    for (const auto& [year, a] : panel.slope_by_year) {
      if (!std::isfinite(a) || !(1.0 - a > 0.0))
        throw ConfigError("panel '" + panel.id.str() + "' year " + std::to_string(year) + ": slope must be < 1");
    }
    panel.cutoffs.validate("panel '" + panel.id.str() + "'");
    auto id = panel.id;
    if (!panels_.emplace(id, std::move(panel)).second) throw ConfigError("duplicate panel '" + id.str() + "'");
  }

  const PanelConfig* find(const PanelId& id) const {
    auto it = panels_.find(id);
    return it == panels_.end() ? nullptr : &it->second;
  }
  const PanelConfig& at(const PanelId& id) const {
    if (auto* p = find(id)) return *p;
    throw ConfigError("unknown panel '" + id.str() + "'");
  }

  // Slope used for a publication of `year`: looked up at year + slope_year_offset.
  std::optional<double> slope(const PanelId& id, int year) const {
    return at(id).slope(year + slope_year_offset);
  }

  std::set<PanelId> ids() const {
    std::set<PanelId> out;
    for (const auto& [id, p] : panels_) out.insert(id);
    return out;
  }
  const std::map<PanelId, PanelConfig>& panels() const noexcept { return panels_; }
  std::size_t size() const noexcept { return panels_.size(); }

  // Copy with every slope replaced by `a`.
  PanelSet with_uniform_slope(double a) const {
    PanelSet out;
    out.window = window;
    out.slope_year_offset = slope_year_offset;
    for (auto p : panels_ | std::views::values) {
      for (auto& [year, s] : p.slope_by_year) s = a;
      out.add(std::move(p));
    }
    return out;
  }

  std::optional<YearWindow> window;  // publication years accepted at ingestion
  int slope_year_offset = 0;

 private:
  std::map<PanelId, PanelConfig> panels_;
};

// Slopes chosen by the bibliometric panels of the 2011-2014 exercise, by
// publication year.
inline PanelSet table1_panels() {
  struct Row {
    const char* id;
    const char* name;
    double s2011, s2012, s2013;
  };
  static constexpr Row rows[] = {
      {"1", "Mathematics and computer science", -1.1, -1.4, -1.7},
      {"2", "Physics", -0.4, -0.6, -0.9},
      {"3", "Chemistry", -0.4, -0.6, -0.8},
      {"4", "Earth sciences", -0.4, -0.6, -0.9},
      {"5", "Biology", -0.4, -0.6, -0.8},
      {"6", "Medicine", -0.4, -0.6, -0.8},
      {"7", "Agricultural and veterinary sciences", -0.7, -0.9, -1.5},
      {"8a", "Civil engineering", -0.6, -0.9, -1.5},
      {"8b", "Architecture", -0.7, -0.9, -1.5},
      {"9", "Industrial and information engineering", -0.4, -0.6, -0.9},
      {"11b", "Psychology", -0.4, -0.6, -1.0},
  };
  PanelSet set;
  for (const auto& r : rows) {
    PanelConfig p;
    p.id = PanelId(r.id);
    p.name = r.name;
    p.slope_by_year = {{2011, r.s2011}, {2012, r.s2012}, {2013, r.s2013}};
    set.add(std::move(p));
  }
  set.window = YearWindow{2011, 2013};
  return set;
}

namespace detail {

inline void read_cutoffs(const config::Document& doc, const config::Section& s, GradingCutoffs& c) {
  for (const auto& [key, v] : s.entries) {
    if (key == "a") c.a = doc.number(v, key);
    else if (key == "b") c.b = doc.number(v, key);
    else if (key == "c") c.c = doc.number(v, key);
    else if (key == "d") c.d = doc.number(v, key);
    else doc.fail(v.line, "unknown grading key '" + key + "'");
  }
}

inline void read_corners(const config::Document& doc, const config::Section& s, CornerBounds& c) {
  for (const auto& [key, v] : s.entries) {
    if (key == "high_c_min") c.high_c_min = doc.number(v, key);
    else if (key == "low_j_max") c.low_j_max = doc.number(v, key);
    else if (key == "low_c_max") c.low_c_max = doc.number(v, key);
    else if (key == "high_j_min") c.high_j_min = doc.number(v, key);
    else doc.fail(v.line, "unknown corners key '" + key + "'");
  }
}

}  // namespace detail

// Schema:
//   [assessment]  first_year, last_year, slope_year_offset   (all optional)
//   [grading]     a, b, c, d        defaults for every panel
//   [corners]     high_c_min, low_j_max, low_c_max, high_j_min
//   [panel.<id>]  name = "...", slope_<year> = <a> ...
//   [panel.<id>.grading] / [panel.<id>.corners]   per-panel overrides
inline PanelSet parse_panels(const config::Document& doc) {
  GradingCutoffs default_cutoffs;
  CornerBounds default_corners;
  std::optional<int> first_year, last_year;
  int offset = 0;

  for (const auto& s : doc.sections) {
    if (s.path.empty()) {
      if (!s.entries.empty()) doc.fail(s.entries.front().second.line, "keys must appear inside a section");
    } else if (s.path == std::vector<std::string>{"assessment"}) {
      for (const auto& [key, v] : s.entries) {
        double n = doc.number(v, key);
        if (n != std::floor(n)) doc.fail(v.line, "'" + key + "' must be an integer");
        if (key == "first_year") first_year = static_cast<int>(n);
        else if (key == "last_year") last_year = static_cast<int>(n);
        else if (key == "slope_year_offset") offset = static_cast<int>(n);
        else doc.fail(v.line, "unknown assessment key '" + key + "'");
      }
    } else if (s.path == std::vector<std::string>{"grading"}) {
      detail::read_cutoffs(doc, s, default_cutoffs);
    } else if (s.path == std::vector<std::string>{"corners"}) {
      detail::read_corners(doc, s, default_corners);
    } else if (s.path.front() != "panel" || s.path.size() < 2 || s.path.size() > 3) {
      doc.fail(s.line, "unknown section");
    }
  }

  PanelSet set;
  for (const auto& s : doc.sections) {
    if (s.path.size() != 2 || s.path.front() != "panel") continue;
    PanelConfig p;
    p.id = PanelId(s.path[1]);
    p.cutoffs = default_cutoffs;
    p.corners = default_corners;
    for (const auto& [key, v] : s.entries) {
      if (key == "name") {
        p.name = doc.string(v, key);
      } else if (key.starts_with("slope_")) {
        auto year = csv::parse_int<int>(std::string_view(key).substr(6));
        if (!year) doc.fail(v.line, "slope key must look like slope_<year>");
        p.slope_by_year[*year] = doc.number(v, key);
      } else {
        doc.fail(v.line, "unknown panel key '" + key + "'");
      }
    }
    if (auto* g = doc.find({"panel", s.path[1], "grading"})) detail::read_cutoffs(doc, *g, p.cutoffs);
    if (auto* c = doc.find({"panel", s.path[1], "corners"})) detail::read_corners(doc, *c, p.corners);
    try {
      set.add(std::move(p));
    } catch (const ConfigError& e) {
      doc.fail(s.line, e.what());
    }
  }
  for (const auto& s : doc.sections) {
    if (s.path.size() == 3 && s.path.front() == "panel" && !set.find(PanelId(s.path[1])))
      doc.fail(s.line, "override for undeclared panel '" + s.path[1] + "'");
    if (s.path.size() == 3 && s.path[2] != "grading" && s.path[2] != "corners") doc.fail(s.line, "unknown section");
  }
  if (set.size() == 0) throw ConfigError(doc.name + ": no [panel.<id>] sections");
  if (first_year.has_value() != last_year.has_value())
    throw ConfigError(doc.name + ": first_year and last_year must be given together");
  if (first_year) {
    if (*first_year > *last_year) throw ConfigError(doc.name + ": first_year after last_year");
    set.window = YearWindow{*first_year, *last_year};
  }
  set.slope_year_offset = offset;
  return set;
}

inline PanelSet load_panels(const std::string& path) { return parse_panels(config::parse_file(path)); }

}  // namespace vqr
