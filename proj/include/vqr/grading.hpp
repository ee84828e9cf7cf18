#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vqr/corpus.hpp"
#include "vqr/error.hpp"
#include "vqr/indicator.hpp"
#include "vqr/panels.hpp"
#include "vqr/parallel.hpp"
#include "vqr/percentile.hpp"

namespace vqr {

// Declared best to worst; the enum order is the grade order.
enum class Letter : std::uint8_t { A = 0, B = 1, C = 2, D = 3, E = 4 };

inline constexpr std::array<Letter, 5> kLetters{Letter::A, Letter::B, Letter::C, Letter::D, Letter::E};

struct Grade {
  Letter letter = Letter::E;

  char symbol() const { return "ABCDE"[static_cast<int>(letter)]; }
  double score() const {
    constexpr double scores[] = {1.0, 0.7, 0.4, 0.1, 0.0};
    return scores[static_cast<int>(letter)];
  }
  std::string_view label() const {
    constexpr std::string_view labels[] = {"Excellent", "Good", "Adequate", "Poor", "Very poor"};
    return labels[static_cast<int>(letter)];
  }

  friend bool operator==(const Grade&, const Grade&) = default;
};

// Strictly better grade than `other`.
inline bool better_than(Letter a, Letter b) { return static_cast<int>(a) < static_cast<int>(b); }

inline Letter parse_letter(std::string_view s) {
  if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'E') return static_cast<Letter>(s[0] - 'A');
  throw Error("invalid grade letter '" + std::string(s) + "'");
}

// Cutoffs are inclusive upward: exactly 90 is an A.
inline Grade grade(double percentile, const GradingCutoffs& cutoffs = {}) {
  if (!(percentile >= 0.0 && percentile <= 100.0))
    throw Error("percentile " + std::to_string(percentile) + " outside [0, 100]");
  if (percentile >= cutoffs.a) return {Letter::A};
  if (percentile >= cutoffs.b) return {Letter::B};
  if (percentile >= cutoffs.c) return {Letter::C};
  if (percentile >= cutoffs.d) return {Letter::D};
  return {Letter::E};
}

inline bool flag_peer_review_corners(double c_percentile, double j_percentile, const CornerBounds& b = {}) {
  const bool top_left = c_percentile >= b.high_c_min && j_percentile <= b.low_j_max;
  const bool bottom_right = c_percentile <= b.low_c_max && j_percentile >= b.high_j_min;
  return top_left || bottom_right;
}

// Per-stratum reference distribution of an indicator over the world
// population. Publications without a value are not members.
class IndicatorReference {
 public:
  IndicatorReference(const Corpus& corpus, std::span<const std::optional<double>> value_by_pub) : corpus_(&corpus) {
    auto pubs = corpus.publications();
    for (std::size_t i = 0; i < pubs.size(); ++i) {
      if (!value_by_pub[i]) continue;
      for (const auto& c : pubs[i].categories) strata_[StratumKey{pubs[i].year, c}].push_back(*value_by_pub[i]);
    }
    for (auto& [k, v] : strata_) std::sort(v.begin(), v.end());
  }

  // Most favorable world percentile of a member publication whose indicator
  // value is `value`. nullopt when every stratum is trivial.
  std::optional<double> world_percentile(Corpus::Index pub, double value) const {
    const auto& p = corpus_->publication(pub);
    std::optional<double> best;
    for (const auto& c : p.categories) {
      auto it = strata_.find(StratumKey{p.year, c});
      if (it == strata_.end()) throw Error("publication '" + p.id.str() + "' is not a reference member");
      auto v = midrank_percentile(it->second, value, true);
      if (v && (!best || *v > *best)) best = v;
    }
    return best;
  }

 private:
  const Corpus* corpus_;
  std::map<StratumKey, std::vector<double>> strata_;
};

struct GradedPublication {
  PubId pub;
  PanelId panel;
  Indicator indicator = Indicator::CShort;
  double value = 0.0;             // indicator value
  double world_percentile = 0.0;  // of `value` in the reference population
  Grade grade;
  bool peer_review_flag = false;
  double c_percentile = 0.0;  // citation percentile the indicator is built on; used as a tie-break
};

// Orders rows by (pub, panel, indicator).
inline bool graded_key_less(const GradedPublication& a, const GradedPublication& b) {
  return std::tie(a.pub, a.panel, a.indicator) < std::tie(b.pub, b.panel, b.indicator);
}

// Grades every assessed (publication, panel) pair by each requested
// indicator. `world_short` and `world_long` must be World-population
// percentile tables; their union of publications forms the reference set.
inline std::vector<GradedPublication> grade_corpus(const Corpus& corpus, const PercentileTable& world_short,
                                                   const PercentileTable& world_long, const PanelSet& panels,
                                                   std::span<const Indicator> indicators, unsigned jobs = 1) {
  const auto n = corpus.publications().size();
  std::vector<std::optional<PercentileRow>> short_rows(n), long_rows(n);
  auto place = [&](const PercentileTable& t, std::vector<std::optional<PercentileRow>>& dest) {
    for (const auto& r : t.rows) {
      auto idx = corpus.find_publication(r.pub);
      if (!idx) throw Error("percentile row for unknown pub_id '" + r.pub.str() + "'");
      dest[*idx] = r;
    }
  };
  place(world_short, short_rows);
  place(world_long, long_rows);

  // (pub index, panel) pairs to grade: assessed publications with both percentiles.
  struct Target {
    Corpus::Index pub;
    PanelId panel;
  };
  std::vector<Target> targets;
  std::set<PanelId> used_panels;
  for (Corpus::Index i = 0; i < n; ++i) {
    if (corpus.publication(i).reference_only || !short_rows[i] || !long_rows[i]) continue;
    for (auto& panel : corpus.panels_of(i)) {
      used_panels.insert(panel);
      targets.push_back({i, std::move(panel)});
    }
  }

  auto values_from = [&](const std::vector<std::optional<PercentileRow>>& rows) {
    std::vector<std::optional<double>> v(n);
    for (std::size_t i = 0; i < n; ++i)
      if (rows[i]) v[i] = rows[i]->c;
    return v;
  };

  std::vector<GradedPublication> out;
  for (Indicator ind : indicators) {
    // One reference per panel for C-J (the slope differs); a shared one otherwise.
    std::map<PanelId, std::vector<std::optional<double>>> values;
    if (ind == Indicator::CJ) {
      std::vector<PanelId> panel_list(used_panels.begin(), used_panels.end());
      std::vector<std::vector<std::optional<double>>> per_panel(panel_list.size());
      parallel_for(panel_list.size(), jobs, [&](std::size_t k) {
        auto& v = per_panel[k];
        v.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          if (!short_rows[i]) continue;
          auto a = panels.slope(panel_list[k], corpus.publication(i).year);
          if (!a) continue;
          v[i] = combined_score(short_rows[i]->c, short_rows[i]->j, *a).value;
        }
      });
      for (std::size_t k = 0; k < panel_list.size(); ++k) values.emplace(panel_list[k], std::move(per_panel[k]));
    } else {
      values.emplace(PanelId{}, values_from(ind == Indicator::CShort ? short_rows : long_rows));
    }

    std::map<PanelId, IndicatorReference> refs;
    for (const auto& [panel, v] : values) refs.emplace(panel, IndicatorReference(corpus, v));

    std::vector<GradedPublication> rows(targets.size());
    parallel_for(targets.size(), jobs, [&](std::size_t t) {
      const auto& target = targets[t];
      const auto key = ind == Indicator::CJ ? target.panel : PanelId{};
      const auto& v = values.at(key)[target.pub];
      const auto& pub = corpus.publication(target.pub);
      if (!v) {
        throw ConfigError("no slope configured for panel '" + target.panel.str() + "' and year " +
                          std::to_string(pub.year + panels.slope_year_offset) + " (publication '" +
                          pub.id.str() + "')");
      }
      auto wp = refs.at(key).world_percentile(target.pub, *v);
      if (!wp) throw UndefinedPercentile("publication '" + pub.id.str() + "' has no reference peers");
      const auto& cfg = panels.at(target.panel);
      auto& g = rows[t];
      g.pub = pub.id;
      g.panel = target.panel;
      g.indicator = ind;
      g.value = *v;
      g.world_percentile = *wp;
      g.grade = grade(*wp, cfg.cutoffs);
      g.peer_review_flag = flag_peer_review_corners(short_rows[target.pub]->c, short_rows[target.pub]->j, cfg.corners);
      g.c_percentile = ind == Indicator::CLong ? long_rows[target.pub]->c : short_rows[target.pub]->c;
    });
    out.insert(out.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }
  std::stable_sort(out.begin(), out.end(), graded_key_less);
  return out;
}

}  // namespace vqr
