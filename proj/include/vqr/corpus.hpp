#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vqr/csv.hpp"
#include "vqr/error.hpp"
#include "vqr/ids.hpp"

namespace vqr {

struct Publication {
  PubId id;
  int year = 0;
  std::vector<CategoryId> categories;
  JournalId journal;
  bool reference_only = false;
  std::vector<std::uint64_t> citations;  // one count per census label, in label order

  friend bool operator==(const Publication&, const Publication&) = default;
};

struct JournalMetric {
  JournalId journal;
  int year = 0;
  CategoryId category;
  double value = 0.0;

  friend bool operator==(const JournalMetric&, const JournalMetric&) = default;
};

struct Researcher {
  ResearcherId id;
  PanelId panel;
  InstitutionId institution;

  friend bool operator==(const Researcher&, const Researcher&) = default;
};

struct Authorship {
  ResearcherId researcher;
  PubId pub;

  friend bool operator==(const Authorship&, const Authorship&) = default;
};

struct YearWindow {
  int first = 0;
  int last = 0;
};

struct IngestOptions {
  std::optional<YearWindow> window;
  // When set, every researcher's panel must be one of these.
  std::optional<std::set<PanelId>> known_panels;
};

// Immutable, validated collection. Every collection is stored sorted by its
// key, so two corpora built from the same rows in any order compare equal.
class Corpus {
 public:
  using Index = std::uint32_t;

  Corpus() = default;

  static Corpus build(std::vector<std::string> census_labels, std::vector<Publication> publications,
                      std::vector<JournalMetric> journal_metrics, std::vector<Researcher> researchers,
                      std::vector<Authorship> authorships, const IngestOptions& options = {}) {
    Corpus c;
    c.census_labels_ = std::move(census_labels);
    c.publications_ = std::move(publications);
    c.journal_metrics_ = std::move(journal_metrics);
    c.researchers_ = std::move(researchers);
    c.authorships_ = std::move(authorships);
    c.validate_and_index(options);
    return c;
  }

  const std::vector<std::string>& census_labels() const noexcept { return census_labels_; }
  std::span<const Publication> publications() const noexcept { return publications_; }
  std::span<const JournalMetric> journal_metrics() const noexcept { return journal_metrics_; }
  std::span<const Researcher> researchers() const noexcept { return researchers_; }
  std::span<const Authorship> authorships() const noexcept { return authorships_; }

  std::size_t census_index(const std::string& label) const {
    for (std::size_t i = 0; i < census_labels_.size(); ++i)
      if (census_labels_[i] == label) return i;
    throw Error("unknown census label '" + label + "'");
  }

  std::optional<Index> find_publication(const PubId& id) const {
    auto it = pub_index_.find(id);
    if (it == pub_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<Index> find_researcher(const ResearcherId& id) const {
    auto it = researcher_index_.find(id);
    if (it == researcher_index_.end()) return std::nullopt;
    return it->second;
  }

  const Publication& publication(Index i) const { return publications_[i]; }
  const Researcher& researcher(Index i) const { return researchers_[i]; }

  // Researchers (indices, ascending id) authoring publication i.
  std::span<const Index> authors_of(Index pub) const { return pub_authors_[pub]; }
  // Publications (indices, ascending id) authored by researcher i.
  std::span<const Index> publications_of(Index researcher) const { return researcher_pubs_[researcher]; }

  // Distinct panels of the publication's authors, ascending.
  std::vector<PanelId> panels_of(Index pub) const {
    std::vector<PanelId> out;
    for (Index r : pub_authors_[pub]) out.push_back(researchers_[r].panel);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.census_labels_ == b.census_labels_ && a.publications_ == b.publications_ &&
           a.journal_metrics_ == b.journal_metrics_ && a.researchers_ == b.researchers_ &&
           a.authorships_ == b.authorships_;
  }

 private:
  void validate_and_index(const IngestOptions& options);

  std::vector<std::string> census_labels_;
  std::vector<Publication> publications_;
  std::vector<JournalMetric> journal_metrics_;
  std::vector<Researcher> researchers_;
  std::vector<Authorship> authorships_;

  std::unordered_map<PubId, Index> pub_index_;
  std::unordered_map<ResearcherId, Index> researcher_index_;
  std::vector<std::vector<Index>> pub_authors_;
  std::vector<std::vector<Index>> researcher_pubs_;
};

inline void Corpus::validate_and_index(const IngestOptions& options) {
  if (census_labels_.size() < 2) throw IntegrityError("corpus needs at least two census labels");
  {
    std::set<std::string> seen;
    for (const auto& l : census_labels_) {
      if (l.empty()) throw IntegrityError("empty census label");
      if (!seen.insert(l).second) throw IntegrityError("duplicate census label '" + l + "'");
    }
  }

  std::sort(publications_.begin(), publications_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(journal_metrics_.begin(), journal_metrics_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.journal, a.year, a.category) < std::tie(b.journal, b.year, b.category);
  });
  std::sort(researchers_.begin(), researchers_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(authorships_.begin(), authorships_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.researcher, a.pub) < std::tie(b.researcher, b.pub);
  });

  std::unordered_set<JournalId> journals;
  for (std::size_t i = 0; i < journal_metrics_.size(); ++i) {
    const auto& m = journal_metrics_[i];
    if (m.journal.empty()) throw IntegrityError("journal metric with empty journal_id");
    if (m.category.empty()) throw IntegrityError("journal '" + m.journal.str() + "' has an empty subject_category");
    if (!std::isfinite(m.value) || m.value < 0.0) {
      throw IntegrityError("journal '" + m.journal.str() + "' year " + std::to_string(m.year) +
                           " has invalid metric_value");
    }
    if (i > 0) {
      const auto& p = journal_metrics_[i - 1];
      if (p.journal == m.journal && p.year == m.year && p.category == m.category) {
        throw IntegrityError("duplicate journal metric for journal '" + m.journal.str() + "', year " +
                             std::to_string(m.year) + ", category '" + m.category.str() + "'");
      }
    }
    journals.insert(m.journal);
  }

  pub_index_.clear();
  pub_index_.reserve(publications_.size());
  for (std::size_t i = 0; i < publications_.size(); ++i) {
    auto& p = publications_[i];
    if (p.id.empty()) throw IntegrityError("publication with empty pub_id");
    if (!pub_index_.emplace(p.id, static_cast<Index>(i)).second)
      throw IntegrityError("duplicate pub_id '" + p.id.str() + "'");
    if (p.categories.empty()) throw IntegrityError("publication '" + p.id.str() + "' has no subject category");
    {
      std::set<CategoryId> cats;
      for (const auto& c : p.categories) {
        if (c.empty()) throw IntegrityError("publication '" + p.id.str() + "' has an empty subject category");
        if (!cats.insert(c).second)
          throw IntegrityError("publication '" + p.id.str() + "' lists category '" + c.str() + "' twice");
      }
    }
    if (p.citations.size() != census_labels_.size())
      throw IntegrityError("publication '" + p.id.str() + "' has the wrong number of citation counts");
    for (std::size_t k = 1; k < p.citations.size(); ++k) {
      if (p.citations[k] < p.citations[k - 1]) {
        throw IntegrityError("publication '" + p.id.str() + "' citations decrease from census '" +
                             census_labels_[k - 1] + "' (" + std::to_string(p.citations[k - 1]) + ") to '" +
                             census_labels_[k] + "' (" + std::to_string(p.citations[k]) + ")");
      }
    }
    if (options.window && (p.year < options.window->first || p.year > options.window->last)) {
      throw IntegrityError("publication '" + p.id.str() + "' year " + std::to_string(p.year) +
                           " outside assessment window " + std::to_string(options.window->first) + "-" +
                           std::to_string(options.window->last));
    }
    if (!journals.contains(p.journal)) {
      throw IntegrityError("publication '" + p.id.str() + "' references unknown journal '" + p.journal.str() + "'");
    }
  }

  researcher_index_.clear();
  for (std::size_t i = 0; i < researchers_.size(); ++i) {
    const auto& r = researchers_[i];
    if (r.id.empty()) throw IntegrityError("researcher with empty researcher_id");
    if (!researcher_index_.emplace(r.id, static_cast<Index>(i)).second)
      throw IntegrityError("duplicate researcher_id '" + r.id.str() + "'");
    if (r.panel.empty()) throw IntegrityError("researcher '" + r.id.str() + "' has an empty panel_id");
    if (options.known_panels && !options.known_panels->contains(r.panel)) {
      throw IntegrityError("researcher '" + r.id.str() + "' belongs to unconfigured panel '" + r.panel.str() + "'");
    }
  }

  pub_authors_.assign(publications_.size(), {});
  researcher_pubs_.assign(researchers_.size(), {});
  for (std::size_t i = 0; i < authorships_.size(); ++i) {
    const auto& a = authorships_[i];
    if (i > 0 && authorships_[i - 1] == a) {
      throw IntegrityError("duplicate authorship (" + a.researcher.str() + ", " + a.pub.str() + ")");
    }
    auto r = find_researcher(a.researcher);
    if (!r) throw IntegrityError("authorship references unknown researcher '" + a.researcher.str() + "'");
    auto p = find_publication(a.pub);
    if (!p) throw IntegrityError("authorship references unknown pub_id '" + a.pub.str() + "'");
    if (publications_[*p].reference_only) {
      throw IntegrityError("publication '" + a.pub.str() + "' is marked reference_only but has an author");
    }
    // authorships are sorted by (researcher, pub), so both lists come out ascending
    researcher_pubs_[*r].push_back(*p);
    pub_authors_[*p].push_back(*r);
  }
}

// --- CSV ingestion -------------------------------------------------------

struct CorpusFiles {
  std::string publications;
  std::string journals;
  std::string researchers;
  std::string authorships;

  static CorpusFiles in_directory(const std::filesystem::path& dir) {
    return {(dir / "publications.csv").string(), (dir / "journals.csv").string(),
            (dir / "researchers.csv").string(), (dir / "authorships.csv").string()};
  }
};

namespace detail {

inline std::string require_nonempty(const csv::Table& t, const csv::Record& r, std::size_t col) {
  if (r.fields[col].empty()) throw ParseError(t.name, r.line, col + 1, "empty " + t.header[col]);
  return r.fields[col];
}

inline int parse_year(const csv::Table& t, const csv::Record& r, std::size_t col) {
  auto y = csv::parse_int<int>(r.fields[col]);
  if (!y) throw ParseError(t.name, r.line, col + 1, "invalid year '" + r.fields[col] + "'");
  return *y;
}

}  // namespace detail

inline Corpus ingest_streams(std::istream& publications, std::istream& journals, std::istream& researchers,
                             std::istream& authorships, const CorpusFiles& names, const IngestOptions& options = {}) {
  using detail::parse_year;
  using detail::require_nonempty;

  auto pt = csv::read_table(publications, names.publications,
                            {"pub_id", "year", "subject_categories", "journal_id", "reference_only"});
  std::vector<std::string> labels;
  for (std::size_t c = 5; c < pt.header.size(); ++c) {
    const auto& h = pt.header[c];
    if (!h.starts_with("cites_") || h.size() == 6)
      throw ParseError(pt.name, 1, c + 1, "expected a 'cites_<label>' column, found '" + h + "'");
    labels.push_back(h.substr(6));
  }
  std::vector<Publication> pubs;
  pubs.reserve(pt.rows.size());
  for (const auto& r : pt.rows) {
    Publication p;
    p.id = PubId(require_nonempty(pt, r, 0));
    p.year = parse_year(pt, r, 1);
    std::string cats = require_nonempty(pt, r, 2);
    std::size_t start = 0;
    for (;;) {
      auto bar = cats.find('|', start);
      auto part = cats.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
      if (part.empty()) throw ParseError(pt.name, r.line, 3, "empty subject category in '" + cats + "'");
      p.categories.emplace_back(part);
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    p.journal = JournalId(require_nonempty(pt, r, 3));
    const auto& ref = r.fields[4];
    if (ref == "0") p.reference_only = false;
    else if (ref == "1") p.reference_only = true;
    else throw ParseError(pt.name, r.line, 5, "reference_only must be 0 or 1, found '" + ref + "'");
    for (std::size_t c = 5; c < r.fields.size(); ++c) {
      auto n = csv::parse_int<std::uint64_t>(r.fields[c]);
      if (!n) throw ParseError(pt.name, r.line, c + 1, "invalid citation count '" + r.fields[c] + "'");
      p.citations.push_back(*n);
    }
    pubs.push_back(std::move(p));
  }

  auto jt = csv::read_table(journals, names.journals, {"journal_id", "year", "subject_category", "metric_value"});
  if (jt.header.size() != 4) throw ParseError(jt.name, 1, 5, "unexpected extra column");
  std::vector<JournalMetric> metrics;
  metrics.reserve(jt.rows.size());
  for (const auto& r : jt.rows) {
    JournalMetric m;
    m.journal = JournalId(require_nonempty(jt, r, 0));
    m.year = parse_year(jt, r, 1);
    m.category = CategoryId(require_nonempty(jt, r, 2));
    auto v = csv::parse_double(r.fields[3]);
    if (!v || !std::isfinite(*v) || *v < 0.0)
      throw ParseError(jt.name, r.line, 4, "metric_value must be a non-negative number, found '" + r.fields[3] + "'");
    m.value = *v;
    metrics.push_back(std::move(m));
  }

  auto rt = csv::read_table(researchers, names.researchers, {"researcher_id", "panel_id", "institution_id"});
  if (rt.header.size() != 3) throw ParseError(rt.name, 1, 4, "unexpected extra column");
  std::vector<Researcher> people;
  for (const auto& r : rt.rows) {
    people.push_back(Researcher{ResearcherId(require_nonempty(rt, r, 0)), PanelId(require_nonempty(rt, r, 1)),
                                InstitutionId(r.fields[2])});
  }

  auto at = csv::read_table(authorships, names.authorships, {"researcher_id", "pub_id"});
  if (at.header.size() != 2) throw ParseError(at.name, 1, 3, "unexpected extra column");
  std::vector<Authorship> links;
  for (const auto& r : at.rows) {
    links.push_back(Authorship{ResearcherId(require_nonempty(at, r, 0)), PubId(require_nonempty(at, r, 1))});
  }

  return Corpus::build(std::move(labels), std::move(pubs), std::move(metrics), std::move(people), std::move(links),
                       options);
}

inline Corpus ingest(const CorpusFiles& files, const IngestOptions& options = {}) {
  auto open = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
  };
  auto p = open(files.publications);
  auto j = open(files.journals);
  auto r = open(files.researchers);
  auto a = open(files.authorships);
  return ingest_streams(p, j, r, a, files, options);
}

// Shortest representation that parses back to the same double.
inline std::string format_exact(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, ptr);
}

inline void write_corpus(const Corpus& corpus, const CorpusFiles& files) {
  auto open = [](const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    return out;
  };
  {
    auto out = open(files.publications);
    std::vector<std::string> header{"pub_id", "year", "subject_categories", "journal_id", "reference_only"};
    for (const auto& l : corpus.census_labels()) header.push_back("cites_" + l);
    csv::write_row(out, header);
    for (const auto& p : corpus.publications()) {
      std::string cats;
      for (std::size_t i = 0; i < p.categories.size(); ++i) {
        if (i) cats.push_back('|');
        cats += p.categories[i].str();
      }
      std::vector<std::string> row{p.id.str(), std::to_string(p.year), cats, p.journal.str(),
                                   p.reference_only ? "1" : "0"};
      for (auto c : p.citations) row.push_back(std::to_string(c));
      csv::write_row(out, row);
    }
  }
  {
    auto out = open(files.journals);
    csv::write_row(out, {"journal_id", "year", "subject_category", "metric_value"});
    for (const auto& m : corpus.journal_metrics())
      csv::write_row(out, {m.journal.str(), std::to_string(m.year), m.category.str(), format_exact(m.value)});
  }
  {
    auto out = open(files.researchers);
    csv::write_row(out, {"researcher_id", "panel_id", "institution_id"});
    for (const auto& r : corpus.researchers()) csv::write_row(out, {r.id.str(), r.panel.str(), r.institution.str()});
  }
  {
    auto out = open(files.authorships);
    csv::write_row(out, {"researcher_id", "pub_id"});
    for (const auto& a : corpus.authorships()) csv::write_row(out, {a.researcher.str(), a.pub.str()});
  }
}

// --- Summary ---------------------------------------------------------------

struct PanelSummary {
  PanelId panel;
  std::size_t researchers = 0;
  std::size_t authorships = 0;
  std::size_t publications = 0;  // distinct within the panel

  friend bool operator==(const PanelSummary&, const PanelSummary&) = default;
};

struct CorpusSummary {
  std::vector<PanelSummary> panels;  // ascending panel id
  std::size_t researchers = 0;
  std::size_t authorships = 0;
  std::size_t publications = 0;  // distinct across all panels
};

inline CorpusSummary corpus_summary(const Corpus& corpus) {
  std::map<PanelId, PanelSummary> rows;
  std::map<PanelId, std::unordered_set<Corpus::Index>> distinct;
  std::unordered_set<Corpus::Index> all;
  CorpusSummary s;
  for (Corpus::Index r = 0; r < corpus.researchers().size(); ++r) {
    const auto& who = corpus.researcher(r);
    auto& row = rows[who.panel];
    row.panel = who.panel;
    ++row.researchers;
    for (auto p : corpus.publications_of(r)) {
      ++row.authorships;
      distinct[who.panel].insert(p);
      all.insert(p);
    }
  }
  for (auto& [panel, row] : rows) {
    row.publications = distinct[panel].size();
    s.researchers += row.researchers;
    s.authorships += row.authorships;
    s.panels.push_back(row);
  }
  s.publications = all.size();
  return s;
}

}  // namespace vqr
