#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vqr/corpus.hpp"
#include "vqr/error.hpp"
#include "vqr/grading.hpp"
#include "vqr/indicator.hpp"

namespace vqr {

// Indicator value of one publication as seen from one panel.
struct ScoredItem {
  PubId pub;
  PanelId panel;
  double value = 0.0;
  double c_percentile = 0.0;  // tie-break
};

struct Selected {
  PubId pub;
  double value = 0.0;

  friend bool operator==(const Selected&, const Selected&) = default;
};

struct SelectionSet {
  std::string indicator;
  std::size_t k = 0;
  std::map<ResearcherId, std::vector<Selected>> picks;  // researchers with >= 1 scored publication
  std::vector<ResearcherId> without_publications;       // researchers with none

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [r, v] : picks) n += v.size();
    return n;
  }

  friend bool operator==(const SelectionSet&, const SelectionSet&) = default;
};

// Top k authored publications per researcher by value, ties broken by higher
// citation percentile and then by ascending pub id.
inline SelectionSet select_best_k(const Corpus& corpus, std::span<const ScoredItem> items, std::string indicator,
                                  std::size_t k) {
  if (k == 0) throw Error("k must be at least 1");
  std::unordered_map<PubId, std::map<PanelId, const ScoredItem*>> lookup;
  for (const auto& it : items) {
    auto& slot = lookup[it.pub][it.panel];
    if (slot) throw Error("duplicate scored item (" + it.pub.str() + ", " + it.panel.str() + ")");
    slot = &it;
  }

  SelectionSet set;
  set.indicator = std::move(indicator);
  set.k = k;
  for (Corpus::Index r = 0; r < corpus.researchers().size(); ++r) {
    const auto& who = corpus.researcher(r);
    std::vector<const ScoredItem*> candidates;
    for (auto p : corpus.publications_of(r)) {
      auto it = lookup.find(corpus.publication(p).id);
      if (it == lookup.end()) continue;
      auto jt = it->second.find(who.panel);
      if (jt != it->second.end()) candidates.push_back(jt->second);
    }
    if (candidates.empty()) {
      set.without_publications.push_back(who.id);
      continue;
    }
    const auto take = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(),
                      [](const ScoredItem* a, const ScoredItem* b) {
                        if (a->value != b->value) return a->value > b->value;
                        if (a->c_percentile != b->c_percentile) return a->c_percentile > b->c_percentile;
                        return a->pub < b->pub;
                      });
    auto& picks = set.picks[who.id];
    for (std::size_t i = 0; i < take; ++i) picks.push_back(Selected{candidates[i]->pub, candidates[i]->value});
  }
  return set;
}

inline std::vector<ScoredItem> scored_items(std::span<const GradedPublication> graded, Indicator indicator) {
  std::vector<ScoredItem> out;
  for (const auto& g : graded)
    if (g.indicator == indicator) out.push_back(ScoredItem{g.pub, g.panel, g.value, g.c_percentile});
  return out;
}

inline SelectionSet select_best_k(const Corpus& corpus, std::span<const GradedPublication> graded, Indicator indicator,
                                  std::size_t k) {
  auto items = scored_items(graded, indicator);
  return select_best_k(corpus, std::span<const ScoredItem>(items), std::string(indicator_name(indicator)), k);
}

struct AuthorshipRow {
  ResearcherId researcher;
  PubId pub;
  PanelId panel;
};

inline std::vector<AuthorshipRow> authorship_rows(const Corpus& corpus) {
  std::vector<AuthorshipRow> out;
  out.reserve(corpus.authorships().size());
  for (const auto& a : corpus.authorships()) {
    const auto& who = corpus.researcher(*corpus.find_researcher(a.researcher));
    out.push_back(AuthorshipRow{a.researcher, a.pub, who.panel});
  }
  return out;
}

struct AnalysisKey {
  PubId pub;
  PanelId panel;

  friend auto operator<=>(const AnalysisKey&, const AnalysisKey&) = default;
  friend bool operator==(const AnalysisKey&, const AnalysisKey&) = default;
};

// Co-authors within one panel collapse to a single row; co-authors in
// different panels keep one row per panel.
inline std::vector<AnalysisKey> dedup_within_panel(std::span<const AuthorshipRow> rows) {
  std::set<AnalysisKey> keys;
  for (const auto& r : rows) keys.insert(AnalysisKey{r.pub, r.panel});
  return {keys.begin(), keys.end()};
}

struct IntersectionEntry {
  std::size_t selected = 0;  // |A|
  std::size_t shared = 0;    // |A ∩ B|
  std::optional<double> ratio;
};

struct IntersectionReport {
  std::map<PanelId, IntersectionEntry> by_panel;
  IntersectionEntry total;
};

// |A ∩ B| / |A| over (researcher, publication) selections, by the
// researcher's panel and overall.
inline IntersectionReport intersection_ratio(const Corpus& corpus, const SelectionSet& a, const SelectionSet& b) {
  if (a.k != b.k) throw Error("selection sets were built with different k");
  IntersectionReport rep;
  for (const auto& [researcher, picks] : a.picks) {
    auto idx = corpus.find_researcher(researcher);
    if (!idx) throw Error("selection references unknown researcher '" + researcher.str() + "'");
    auto& entry = rep.by_panel[corpus.researcher(*idx).panel];
    std::set<PubId> other;
    if (auto it = b.picks.find(researcher); it != b.picks.end())
      for (const auto& s : it->second) other.insert(s.pub);
    for (const auto& s : picks) {
      ++entry.selected;
      ++rep.total.selected;
      if (other.contains(s.pub)) {
        ++entry.shared;
        ++rep.total.shared;
      }
    }
  }
  auto finish = [](IntersectionEntry& e) {
    if (e.selected > 0) e.ratio = static_cast<double>(e.shared) / static_cast<double>(e.selected);
  };
  for (auto& [p, e] : rep.by_panel) finish(e);
  finish(rep.total);
  return rep;
}

}  // namespace vqr
