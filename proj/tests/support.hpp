#pragma once

// Shared fixtures for the unit tests: terse corpus builders, a brute-force
// percentile oracle and temp-dir handling.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <sstream>
#include <string>
#include <vector>

#include "vqr/vqr.hpp"

namespace vqrtest {

using namespace vqr;

inline Publication pub(std::string id, int year, std::vector<std::string> cats, std::string journal,
                       std::vector<std::uint64_t> cites, bool reference_only = false) {
  Publication p;
  p.id = PubId(std::move(id));
  p.year = year;
  for (auto& c : cats) p.categories.emplace_back(std::move(c));
  p.journal = JournalId(std::move(journal));
  p.citations = std::move(cites);
  p.reference_only = reference_only;
  return p;
}

inline JournalMetric metric(std::string journal, int year, std::string cat, double v) {
  return JournalMetric{JournalId(std::move(journal)), year, CategoryId(std::move(cat)), v};
}

inline Researcher researcher(std::string id, std::string panel, std::string inst = "U1") {
  return Researcher{ResearcherId(std::move(id)), PanelId(std::move(panel)), InstitutionId(std::move(inst))};
}

inline Authorship authorship(std::string r, std::string p) {
  return Authorship{ResearcherId(std::move(r)), PubId(std::move(p))};
}

// Percentile by counting pairs, with no sorting or searching involved.
inline std::optional<double> pairwise_percentile(const std::vector<double>& stratum, double value, bool member) {
  std::uint64_t less = 0, equal = 0, peers = 0;
  bool skipped = !member;
  for (double x : stratum) {
    if (!skipped && x == value) {
      skipped = true;
      continue;
    }
    ++peers;
    if (x < value) ++less;
    else if (x == value) ++equal;
  }
  if (peers == 0) return std::nullopt;
  return 100.0 * static_cast<double>(2 * less + equal) / static_cast<double>(2 * peers);
}

// Brute-force C and J percentiles of every publication at one census, read
// straight off the corpus rows.
struct OracleRow {
  std::optional<double> c;
  std::optional<double> j;
};

inline std::vector<OracleRow> oracle_percentiles(const Corpus& corpus, std::size_t census) {
  std::vector<OracleRow> out;
  const auto pubs = corpus.publications();
  const auto metrics = corpus.journal_metrics();
  for (const auto& p : pubs) {
    OracleRow row;
    for (const auto& cat : p.categories) {
      std::vector<double> stratum;
      for (const auto& q : pubs)
        if (q.year == p.year && std::find(q.categories.begin(), q.categories.end(), cat) != q.categories.end())
          stratum.push_back(static_cast<double>(q.citations[census]));
      auto v = pairwise_percentile(stratum, static_cast<double>(p.citations[census]), true);
      if (v && (!row.c || *v > *row.c)) row.c = v;
    }
    for (const auto& m : metrics) {
      if (m.journal != p.journal || m.year != p.year) continue;
      std::vector<double> stratum;
      for (const auto& q : metrics)
        if (q.year == m.year && q.category == m.category) stratum.push_back(q.value);
      auto v = pairwise_percentile(stratum, m.value, true);
      if (v && (!row.j || *v > *row.j)) row.j = v;
    }
    out.push_back(row);
  }
  return out;
}

// Small random corpus with heavy ties: few distinct citation counts and
// journal metrics drawn from a short list.
inline Corpus random_tied_corpus(std::uint64_t seed, std::size_t n_pubs) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };
  const int years[] = {2011, 2012};
  const std::vector<std::string> cats{"S1", "S2", "S3"};
  std::vector<JournalMetric> metrics;
  std::vector<std::string> journals;
  for (int j = 0; j < 12; ++j) {
    std::string id = "J" + std::to_string(j);
    journals.push_back(id);
    for (int y : years) {
      metrics.push_back(metric(id, y, cats[static_cast<std::size_t>(j) % 3], static_cast<double>(below(4)) * 0.5));
      if (j % 4 == 0) metrics.push_back(metric(id, y, cats[(static_cast<std::size_t>(j) + 1) % 3], 1.0 + static_cast<double>(below(3))));
    }
  }
  std::vector<Publication> pubs;
  for (std::size_t i = 0; i < n_pubs; ++i) {
    const int y = years[below(2)];
    std::vector<std::string> pc{cats[below(3)]};
    if (below(5) == 0) {
      auto other = cats[below(3)];
      if (other != pc[0]) pc.push_back(other);
    }
    const std::uint64_t first = below(6);
    pubs.push_back(pub("P" + std::to_string(1000 + i), y, pc, journals[below(journals.size())],
                       {first, first + below(8)}, below(3) == 0));
  }
  std::vector<Researcher> rs{researcher("R1", "1"), researcher("R2", "2")};
  std::vector<Authorship> as;
  for (const auto& p : pubs)
    if (!p.reference_only) as.push_back(authorship(below(2) ? "R1" : "R2", p.id.str()));
  return Corpus::build({"2013", "2020"}, std::move(pubs), std::move(metrics), std::move(rs), std::move(as));
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("vqr-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace vqrtest
