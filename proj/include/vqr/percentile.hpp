#pragma once

// Mid-rank percentiles within (year, subject category) strata.
//
// For a target with value v in a stratum S:
//   less  = #{s in S, s != target : value(s) <  v}
//   equal = #{s in S, s != target : value(s) == v}
//   percentile = 100 * (less + equal / 2) / |S \ {target}|
// evaluated as 100 * (2*less + equal) / (2*|S \ {target}|) so that the result
// depends only on two integers. A target with several categories takes the
// best of its non-trivial strata.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqr/corpus.hpp"
#include "vqr/error.hpp"
#include "vqr/parallel.hpp"

namespace vqr {

struct StratumKey {
  int year = 0;
  CategoryId category;

  friend auto operator<=>(const StratumKey&, const StratumKey&) = default;
  friend bool operator==(const StratumKey&, const StratumKey&) = default;
};

inline std::string to_string(const StratumKey& k) { return std::to_string(k.year) + "/" + k.category.str(); }

struct PercentileResult {
  std::string id;
  double value = 0.0;
  StratumKey stratum;
  std::string census_label;  // empty for journal percentiles
};

// Percentile of `value` against an ascending-sorted stratum. When
// `target_is_member` the sorted range contains the target once and it is
// left out of the comparison set. Returns nullopt for an empty comparison set.
template <typename T>
std::optional<double> midrank_percentile(std::span<const T> sorted, const T& value, bool target_is_member) {
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), value);
  const auto hi = std::upper_bound(lo, sorted.end(), value);
  const auto less = static_cast<std::uint64_t>(lo - sorted.begin());
  auto equal = static_cast<std::uint64_t>(hi - lo);
  auto peers = static_cast<std::uint64_t>(sorted.size());
  if (target_is_member) {
    if (equal == 0) throw Error("target declared as stratum member but its value is absent");
    --equal;
    --peers;
  }
  if (peers == 0) return std::nullopt;
  return 100.0 * static_cast<double>(2 * less + equal) / static_cast<double>(2 * peers);
}

template <typename T>
std::optional<double> midrank_percentile(const std::vector<T>& sorted, const T& value, bool target_is_member) {
  return midrank_percentile(std::span<const T>(sorted), value, target_is_member);
}

// Sorted citation counts at one census label for every (year, category).
// All publications, reference-only included, are stratum members.
class CitationStrata {
 public:
  CitationStrata(const Corpus& corpus, std::size_t census, unsigned jobs = 1) : census_(census) {
    for (const auto& p : corpus.publications())
      for (const auto& c : p.categories) strata_[StratumKey{p.year, c}].push_back(p.citations[census]);
    sort_all(jobs);
  }

  std::size_t census() const noexcept { return census_; }

  const std::vector<std::uint64_t>* find(const StratumKey& key) const {
    auto it = strata_.find(key);
    return it == strata_.end() ? nullptr : &it->second;
  }

  // Most favorable percentile of a member publication.
  std::optional<std::pair<double, StratumKey>> best(const Publication& p) const {
    std::optional<std::pair<double, StratumKey>> out;
    for (const auto& c : p.categories) {
      StratumKey key{p.year, c};
      auto v = midrank_percentile(strata_.at(key), p.citations[census_], true);
      if (v && (!out || *v > out->first)) out.emplace(*v, key);
    }
    return out;
  }

 private:
  void sort_all(unsigned jobs) {
    std::vector<std::vector<std::uint64_t>*> lists;
    for (auto& [k, v] : strata_) lists.push_back(&v);
    parallel_for(lists.size(), jobs, [&](std::size_t i) { std::sort(lists[i]->begin(), lists[i]->end()); });
  }

  std::size_t census_;
  std::map<StratumKey, std::vector<std::uint64_t>> strata_;
};

// Sorted journal metric values per (year, category).
class JournalStrata {
 public:
  explicit JournalStrata(const Corpus& corpus) : corpus_(&corpus) {
    for (const auto& m : corpus.journal_metrics()) strata_[StratumKey{m.year, m.category}].push_back(m.value);
    for (auto& [k, v] : strata_) std::sort(v.begin(), v.end());
  }

  // nullopt when the journal has no entry for the year; throws
  // UndefinedPercentile when all of its strata are trivial.
  std::optional<std::pair<double, StratumKey>> best(const JournalId& journal, int year) const {
    auto metrics = corpus_->journal_metrics();
    auto lo = std::lower_bound(metrics.begin(), metrics.end(), std::pair{journal, year},
                               [](const JournalMetric& m, const std::pair<JournalId, int>& k) {
                                 return std::tie(m.journal, m.year) < std::tie(k.first, k.second);
                               });
    if (lo == metrics.end() || lo->journal != journal || lo->year != year) return std::nullopt;
    std::optional<std::pair<double, StratumKey>> out;
    for (auto it = lo; it != metrics.end() && it->journal == journal && it->year == year; ++it) {
      StratumKey key{year, it->category};
      auto v = midrank_percentile(strata_.at(key), it->value, true);
      if (v && (!out || *v > out->first)) out.emplace(*v, key);
    }
    if (!out) {
      throw UndefinedPercentile("journal '" + journal.str() + "' has no peers in any stratum for year " +
                                std::to_string(year));
    }
    return out;
  }

 private:
  const Corpus* corpus_;
  std::map<StratumKey, std::vector<double>> strata_;
};

inline PercentileResult citation_percentile(const Corpus& corpus, const PubId& pub, const std::string& census_label) {
  auto idx = corpus.find_publication(pub);
  if (!idx) throw Error("unknown pub_id '" + pub.str() + "'");
  const std::size_t census = corpus.census_index(census_label);
  const auto& target = corpus.publication(*idx);
  // Only the target's own strata are needed.
  std::map<StratumKey, std::vector<std::uint64_t>> strata;
  for (const auto& c : target.categories) strata[StratumKey{target.year, c}];
  for (const auto& p : corpus.publications()) {
    if (p.year != target.year) continue;
    for (const auto& c : p.categories) {
      auto it = strata.find(StratumKey{p.year, c});
      if (it != strata.end()) it->second.push_back(p.citations[census]);
    }
  }
  std::optional<PercentileResult> best;
  for (auto& [key, values] : strata) {
    std::sort(values.begin(), values.end());
    auto v = midrank_percentile(values, target.citations[census], true);
    if (v && (!best || *v > best->value)) best = PercentileResult{pub.str(), *v, key, census_label};
  }
  if (!best) {
    throw UndefinedPercentile("publication '" + pub.str() + "' has no peers in any stratum at census '" +
                              census_label + "'");
  }
  return *best;
}

inline PercentileResult journal_percentile(const Corpus& corpus, const JournalId& journal, int year) {
  JournalStrata strata(corpus);
  auto best = strata.best(journal, year);
  if (!best) {
    throw Error("journal '" + journal.str() + "' has no metric entry for year " + std::to_string(year));
  }
  return PercentileResult{journal.str(), best->first, best->second, {}};
}

struct PercentileRow {
  PubId pub;
  std::string census_label;
  double c = 0.0;  // citation percentile
  double j = 0.0;  // journal percentile

  friend bool operator==(const PercentileRow&, const PercentileRow&) = default;
};

struct PercentileFailure {
  PubId pub;
  std::string census_label;
  std::string reason;

  friend bool operator==(const PercentileFailure&, const PercentileFailure&) = default;
};

struct PercentileTable {
  std::vector<PercentileRow> rows;  // ascending pub id
  std::vector<PercentileFailure> failures;
};

enum class Population {
  Assessed,  // publications not flagged reference_only
  World,     // every publication
};

// Batch form of citation_percentile + journal_percentile for one census
// label. Failures are collected rather than thrown.
inline PercentileTable percentile_table(const Corpus& corpus, const std::string& census_label,
                                        Population population = Population::Assessed, unsigned jobs = 1) {
  const std::size_t census = corpus.census_index(census_label);
  CitationStrata citations(corpus, census, jobs);
  JournalStrata journals(corpus);

  auto pubs = corpus.publications();
  struct Slot {
    bool included = false;
    std::optional<PercentileRow> row;
    std::optional<PercentileFailure> failure;
  };
  std::vector<Slot> slots(pubs.size());
  parallel_for(pubs.size(), jobs, [&](std::size_t i) {
    const auto& p = pubs[i];
    auto& slot = slots[i];
    if (population == Population::Assessed && p.reference_only) return;
    slot.included = true;
    auto c = citations.best(p);
    if (!c) {
      slot.failure = PercentileFailure{p.id, census_label, "undefined citation percentile: no peers in any stratum"};
      return;
    }
    std::optional<std::pair<double, StratumKey>> j;
    try {
      j = journals.best(p.journal, p.year);
    } catch (const UndefinedPercentile&) {
      slot.failure = PercentileFailure{p.id, census_label,
                                       "undefined journal percentile: journal '" + p.journal.str() +
                                           "' has no peers in any stratum"};
      return;
    }
    if (!j) {
      slot.failure = PercentileFailure{p.id, census_label,
                                       "journal '" + p.journal.str() + "' has no metric entry for year " +
                                           std::to_string(p.year)};
      return;
    }
    slot.row = PercentileRow{p.id, census_label, c->first, j->first};
  });

  PercentileTable table;
  for (auto& s : slots) {
    if (s.row) table.rows.push_back(std::move(*s.row));
    if (s.failure) table.failures.push_back(std::move(*s.failure));
  }
  return table;
}

}  // namespace vqr
