#pragma once

// End-to-end run over an in-memory corpus, and the CSV artifacts that let the
// same stages run one command at a time.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vqr/corpus.hpp"
#include "vqr/csv.hpp"
#include "vqr/error.hpp"
#include "vqr/evaluation.hpp"
#include "vqr/grading.hpp"
#include "vqr/indicator.hpp"
#include "vqr/panels.hpp"
#include "vqr/percentile.hpp"
#include "vqr/selection.hpp"

namespace vqr {

struct PipelineOptions {
  std::string short_label;  // empty: first census label
  std::string long_label;   // empty: last census label
  std::vector<Indicator> indicators{Indicator::CShort, Indicator::CLong, Indicator::CJ};
  Indicator benchmark = Indicator::CLong;
  std::vector<Indicator> predictors{Indicator::CShort, Indicator::CJ};
  std::size_t k = 2;
  unsigned jobs = 1;
};

struct CensusPair {
  std::string short_label;
  std::string long_label;
};

inline CensusPair resolve_census(const Corpus& corpus, const std::string& short_label, const std::string& long_label) {
  CensusPair c{short_label.empty() ? corpus.census_labels().front() : short_label,
               long_label.empty() ? corpus.census_labels().back() : long_label};
  if (corpus.census_index(c.short_label) >= corpus.census_index(c.long_label)) {
    throw Error("short census '" + c.short_label + "' must precede long census '" + c.long_label + "'");
  }
  return c;
}

inline PercentileTable assessed_only(const Corpus& corpus, const PercentileTable& world) {
  PercentileTable out;
  for (const auto& r : world.rows)
    if (!corpus.publication(*corpus.find_publication(r.pub)).reference_only) out.rows.push_back(r);
  for (const auto& f : world.failures)
    if (!corpus.publication(*corpus.find_publication(f.pub)).reference_only) out.failures.push_back(f);
  return out;
}

struct PipelineResult {
  CensusPair census;
  PercentileTable world_short;
  PercentileTable world_long;
  std::vector<ScoreRow> scores;
  std::vector<GradedPublication> graded;
  std::map<Indicator, SelectionSet> selections;
  EvaluationReport report;
};

inline PipelineResult run_pipeline(const Corpus& corpus, const PanelSet& panels, const PipelineOptions& opt) {
  PipelineResult r;
  r.census = resolve_census(corpus, opt.short_label, opt.long_label);
  r.world_short = percentile_table(corpus, r.census.short_label, Population::World, opt.jobs);
  r.world_long = percentile_table(corpus, r.census.long_label, Population::World, opt.jobs);
  r.scores = score_corpus(corpus, assessed_only(corpus, r.world_short), panels);
  r.graded = grade_corpus(corpus, r.world_short, r.world_long, panels, opt.indicators, opt.jobs);
  std::set<Indicator> needed(opt.predictors.begin(), opt.predictors.end());
  needed.insert(opt.benchmark);
  for (auto ind : needed) r.selections.emplace(ind, select_best_k(corpus, r.graded, ind, opt.k));
  r.report = evaluate(corpus, r.graded, opt.benchmark, opt.predictors, r.selections);
  return r;
}

// --- artifacts -----------------------------------------------------------------

namespace artifacts {

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

// percentiles.csv / world_percentiles.csv: pub_id,census_label,c_percentile,j_percentile
// Rows ascend by pub id, then census label in corpus order. Values use the
// shortest exact decimal form so later stages reread the same doubles.
inline void write_percentiles(const std::filesystem::path& path, const std::vector<const PercentileTable*>& tables) {
  std::vector<const PercentileRow*> rows;
  for (std::size_t t = 0; t < tables.size(); ++t)
    for (const auto& r : tables[t]->rows) rows.push_back(&r);
  std::map<std::string, std::size_t> label_order;
  for (std::size_t t = 0; t < tables.size(); ++t)
    if (!tables[t]->rows.empty()) label_order.emplace(tables[t]->rows.front().census_label, t);
  std::stable_sort(rows.begin(), rows.end(), [&](const PercentileRow* a, const PercentileRow* b) {
    if (a->pub != b->pub) return a->pub < b->pub;
    return label_order[a->census_label] < label_order[b->census_label];
  });
  auto out = open_out(path);
  csv::write_row(out, {"pub_id", "census_label", "c_percentile", "j_percentile"});
  for (const auto* r : rows)
    csv::write_row(out, {r->pub.str(), r->census_label, format_exact(r->c), format_exact(r->j)});
}

inline void write_failures(const std::filesystem::path& path, const std::vector<const PercentileTable*>& tables) {
  auto out = open_out(path);
  csv::write_row(out, {"pub_id", "census_label", "reason"});
  for (const auto* t : tables)
    for (const auto& f : t->failures) csv::write_row(out, {f.pub.str(), f.census_label, f.reason});
}

inline double parse_value(const csv::Table& t, const csv::Record& r, std::size_t col) {
  auto v = csv::parse_double(r.fields[col]);
  if (!v) throw ParseError(t.name, r.line, col + 1, "invalid number '" + r.fields[col] + "'");
  return *v;
}

inline std::map<std::string, PercentileTable> read_percentiles(const std::filesystem::path& path) {
  auto t = csv::read_table_file(path.string(), {"pub_id", "census_label", "c_percentile", "j_percentile"});
  std::map<std::string, PercentileTable> out;
  for (const auto& r : t.rows) {
    PercentileRow row{PubId(r.fields[0]), r.fields[1], parse_value(t, r, 2), parse_value(t, r, 3)};
    auto& rows = out[row.census_label].rows;
    if (!rows.empty() && !(rows.back().pub < row.pub))
      throw ParseError(t.name, r.line, 1, "rows must ascend by pub_id with one row per census label");
    rows.push_back(std::move(row));
  }
  return out;
}

inline const PercentileTable& table_for(const std::map<std::string, PercentileTable>& tables, const std::string& label,
                                        const std::string& file) {
  auto it = tables.find(label);
  if (it == tables.end()) throw Error(file + ": no rows for census label '" + label + "'");
  return it->second;
}

// scores.csv
inline void write_scores(const std::filesystem::path& path, const std::vector<ScoreRow>& scores) {
  auto out = open_out(path);
  csv::write_row(out, {"pub_id", "panel_id", "year", "slope", "c_percentile", "j_percentile", "weight_on_c",
                       "weight_on_j", "value"});
  for (const auto& s : scores)
    csv::write_row(out, {s.pub.str(), s.panel.str(), std::to_string(s.year), format_exact(s.score.slope),
                         format_exact(s.score.c_percentile), format_exact(s.score.j_percentile),
                         format_exact(s.score.weight_on_c), format_exact(s.score.weight_on_j),
                         format_exact(s.score.value)});
}

// grades.csv: pub_id,panel_id,indicator,value,world_percentile,letter,score,peer_flag
inline void write_grades(const std::filesystem::path& path, const std::vector<GradedPublication>& graded) {
  auto out = open_out(path);
  csv::write_row(out, {"pub_id", "panel_id", "indicator", "value", "world_percentile", "letter", "score", "peer_flag"});
  for (const auto& g : graded)
    csv::write_row(out, {g.pub.str(), g.panel.str(), std::string(indicator_name(g.indicator)), format_exact(g.value),
                         format_exact(g.world_percentile), std::string(1, g.grade.symbol()),
                         csv::format_fixed(g.grade.score(), 1), g.peer_review_flag ? "1" : "0"});
}

// Rebuilds graded rows; the tie-break percentile comes from percentiles.csv.
inline std::vector<GradedPublication> read_grades(const std::filesystem::path& path,
                                                  const std::map<std::string, PercentileTable>& percentiles,
                                                  const CensusPair& census) {
  auto index_of = [&](const std::string& label) {
    std::unordered_map<PubId, double> m;
    for (const auto& r : table_for(percentiles, label, "percentiles").rows) m.emplace(r.pub, r.c);
    return m;
  };
  const auto c_short = index_of(census.short_label);
  const auto c_long = index_of(census.long_label);

  auto t = csv::read_table_file(path.string(), {"pub_id", "panel_id", "indicator", "value", "world_percentile",
                                                "letter", "score", "peer_flag"});
  std::vector<GradedPublication> out;
  for (const auto& r : t.rows) {
    GradedPublication g;
    g.pub = PubId(r.fields[0]);
    g.panel = PanelId(r.fields[1]);
    try {
      g.indicator = parse_indicator(r.fields[2]);
      g.grade.letter = parse_letter(r.fields[5]);
    } catch (const Error& e) {
      throw ParseError(t.name, r.line, 0, e.what());
    }
    g.value = parse_value(t, r, 3);
    g.world_percentile = parse_value(t, r, 4);
    if (r.fields[7] != "0" && r.fields[7] != "1") throw ParseError(t.name, r.line, 8, "peer_flag must be 0 or 1");
    g.peer_review_flag = r.fields[7] == "1";
    const auto& source = g.indicator == Indicator::CLong ? c_long : c_short;
    auto it = source.find(g.pub);
    if (it == source.end()) throw ParseError(t.name, r.line, 1, "no percentile row for '" + g.pub.str() + "'");
    g.c_percentile = it->second;
    out.push_back(std::move(g));
  }
  std::stable_sort(out.begin(), out.end(), graded_key_less);
  return out;
}

// selections.csv: indicator,researcher_id,rank,pub_id,value
inline void write_selections(const std::filesystem::path& path, const std::vector<const SelectionSet*>& sets) {
  auto out = open_out(path);
  csv::write_row(out, {"indicator", "researcher_id", "rank", "pub_id", "value"});
  for (const auto* s : sets)
    for (const auto& [researcher, picks] : s->picks)
      for (std::size_t i = 0; i < picks.size(); ++i)
        csv::write_row(out, {s->indicator, researcher.str(), std::to_string(i + 1), picks[i].pub.str(),
                             format_exact(picks[i].value)});
}

inline std::map<Indicator, SelectionSet> read_selections(const std::filesystem::path& path, const Corpus& corpus,
                                                         std::size_t k) {
  auto t = csv::read_table_file(path.string(), {"indicator", "researcher_id", "rank", "pub_id", "value"});
  std::map<Indicator, SelectionSet> out;
  for (const auto& r : t.rows) {
    Indicator ind;
    try {
      ind = parse_indicator(r.fields[0]);
    } catch (const Error& e) {
      throw ParseError(t.name, r.line, 1, e.what());
    }
    auto& set = out[ind];
    set.indicator = r.fields[0];
    set.k = k;
    auto rank = csv::parse_int<std::size_t>(r.fields[2]);
    auto& picks = set.picks[ResearcherId(r.fields[1])];
    if (!rank || *rank != picks.size() + 1 || *rank > k)
      throw ParseError(t.name, r.line, 3, "rank out of sequence or above k=" + std::to_string(k));
    picks.push_back(Selected{PubId(r.fields[3]), parse_value(t, r, 4)});
  }
  for (auto& [ind, set] : out)
    for (const auto& who : corpus.researchers())
      if (!set.picks.contains(who.id)) set.without_publications.push_back(who.id);
  return out;
}

inline void write_summary(const std::filesystem::path& path, const CorpusSummary& s) {
  auto out = open_out(path);
  csv::write_row(out, {"panel_id", "researchers", "authorships", "publications"});
  for (const auto& p : s.panels)
    csv::write_row(out, {p.panel.str(), std::to_string(p.researchers), std::to_string(p.authorships),
                         std::to_string(p.publications)});
  csv::write_row(out, {"total", std::to_string(s.researchers), std::to_string(s.authorships),
                       std::to_string(s.publications)});
}

}  // namespace artifacts

}  // namespace vqr
