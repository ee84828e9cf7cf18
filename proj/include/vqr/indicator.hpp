#pragma once

// Combined citation / journal indicator.
//
// A threshold line of slope a in the (J, C) plane is C = a*J + k. Moving the
// terms to one side and dividing by (1 - a) gives
//     (C - a*J) / (1 - a) = k / (1 - a),
// so the indicator
//     S(C, J) = C/(1 - a) + (-a/(1 - a)) * J
// is constant along every such line. With a <= 0 both weights are
// non-negative and sum to one, making S a convex combination of C and J.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vqr/corpus.hpp"
#include "vqr/error.hpp"
#include "vqr/panels.hpp"
#include "vqr/percentile.hpp"

namespace vqr {

enum class Indicator { CShort, CLong, CJ };

inline constexpr Indicator kAllIndicators[] = {Indicator::CShort, Indicator::CLong, Indicator::CJ};

inline std::string_view indicator_name(Indicator i) {
  switch (i) {
    case Indicator::CShort: return "C_short";
    case Indicator::CLong: return "C_long";
    case Indicator::CJ: return "C-J";
  }
  return "?";
}

inline Indicator parse_indicator(std::string_view text) {
  for (auto i : kAllIndicators)
    if (indicator_name(i) == text) return i;
  throw Error("unknown indicator '" + std::string(text) + "' (expected C_short, C_long or C-J)");
}

struct IndicatorWeights {
  double on_c = 1.0;
  double on_j = 0.0;
};

inline IndicatorWeights weights_for_slope(double a) {
  if (!std::isfinite(a) || !(1.0 - a > 0.0))
    throw Error("slope " + std::to_string(a) + " is not allowed: weights need 1 - a > 0");
  // 0.0 - a rather than -a keeps a zero slope from producing a -0.0 weight
  return {1.0 / (1.0 - a), (0.0 - a) / (1.0 - a)};
}

struct CombinedScore {
  double c_percentile = 0.0;
  double j_percentile = 0.0;
  double slope = 0.0;
  double weight_on_c = 1.0;
  double weight_on_j = 0.0;
  double value = 0.0;
};

inline CombinedScore combined_score(double c_percentile, double j_percentile, double a) {
  auto in_range = [](double p) { return p >= 0.0 && p <= 100.0; };
  if (!in_range(c_percentile) || !in_range(j_percentile))
    throw Error("percentiles must lie in [0, 100]");
  const auto w = weights_for_slope(a);
  CombinedScore s;
  s.c_percentile = c_percentile;
  s.j_percentile = j_percentile;
  s.slope = a;
  s.weight_on_c = w.on_c;
  s.weight_on_j = w.on_j;
  // C + w_J (J - C) equals w_C C + w_J J and returns C unchanged when J == C
  s.value = c_percentile + w.on_j * (j_percentile - c_percentile);
  return s;
}

struct ScoreRow {
  PubId pub;
  PanelId panel;
  int year = 0;
  CombinedScore score;
};

// One combined score per (publication, panel of one of its authors), using
// the citation percentiles of `percentiles`. Rows ascend by (pub, panel).
inline std::vector<ScoreRow> score_corpus(const Corpus& corpus, const PercentileTable& percentiles,
                                          const PanelSet& panels) {
  std::vector<ScoreRow> out;
  for (const auto& row : percentiles.rows) {
    auto idx = corpus.find_publication(row.pub);
    if (!idx) throw Error("percentile row for unknown pub_id '" + row.pub.str() + "'");
    const auto& pub = corpus.publication(*idx);
    for (const auto& panel : corpus.panels_of(*idx)) {
      auto a = panels.slope(panel, pub.year);
      if (!a) {
        throw ConfigError("no slope configured for panel '" + panel.str() + "' and year " +
                          std::to_string(pub.year + panels.slope_year_offset) + " (publication '" +
                          pub.id.str() + "')");
      }
      out.push_back(ScoreRow{pub.id, panel, pub.year, combined_score(row.c, row.j, *a)});
    }
  }
  return out;
}

}  // namespace vqr
