#pragma once

// Predictive-power comparison of predictor indicators against a benchmark:
// correlation and difference statistics (overall, by year, by panel), grade
// confusion matrices for all authorships and for best-k selections, grading
// shares and selection intersections.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "vqr/corpus.hpp"
#include "vqr/csv.hpp"
#include "vqr/error.hpp"
#include "vqr/grading.hpp"
#include "vqr/indicator.hpp"
#include "vqr/selection.hpp"
#include "vqr/stats.hpp"

namespace vqr {

struct Comparison {
  Indicator predictor = Indicator::CShort;
  stats::DiffStats publication_level;  // one row per (pub, panel)
  stats::DiffStats authorship_level;   // one row per (researcher, pub)
  std::map<int, stats::DiffStats> by_year;
  std::map<PanelId, stats::DiffStats> by_panel;
  stats::ConfusionMatrix all;     // every authorship
  stats::ConfusionMatrix best_k;  // authorships chosen by the predictor's best-k selection
  IntersectionReport intersection;  // benchmark selection ∩ predictor selection
};

struct EvaluationReport {
  Indicator benchmark = Indicator::CLong;
  std::size_t k = 0;
  std::size_t publication_rows = 0;
  std::size_t authorship_rows = 0;
  std::size_t best_k_rows = 0;  // size of the benchmark's selection
  std::vector<Comparison> comparisons;
};

namespace detail {

using GradeKey = std::tuple<PubId, PanelId, Indicator>;

inline std::map<GradeKey, const GradedPublication*> index_graded(std::span<const GradedPublication> graded) {
  std::map<GradeKey, const GradedPublication*> out;
  for (const auto& g : graded)
    if (!out.emplace(GradeKey{g.pub, g.panel, g.indicator}, &g).second)
      throw Error("duplicate graded row (" + g.pub.str() + ", " + g.panel.str() + ", " +
                  std::string(indicator_name(g.indicator)) + ")");
  return out;
}

}  // namespace detail

inline EvaluationReport evaluate(const Corpus& corpus, std::span<const GradedPublication> graded, Indicator benchmark,
                                 std::span<const Indicator> predictors,
                                 const std::map<Indicator, SelectionSet>& selections) {
  const auto index = detail::index_graded(graded);
  auto find = [&](const PubId& pub, const PanelId& panel, Indicator ind) -> const GradedPublication* {
    auto it = index.find(detail::GradeKey{pub, panel, ind});
    return it == index.end() ? nullptr : it->second;
  };

  const auto& bench_sel = selections.at(benchmark);
  EvaluationReport rep;
  rep.benchmark = benchmark;
  rep.k = bench_sel.k;
  rep.best_k_rows = bench_sel.size();

  const auto authorships = authorship_rows(corpus);
  const auto keys = dedup_within_panel(authorships);

  for (Indicator pred : predictors) {
    Comparison cmp;
    cmp.predictor = pred;

    std::vector<double> pv, bv;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_year;
    std::map<PanelId, std::pair<std::vector<double>, std::vector<double>>> by_panel;
    for (const auto& key : keys) {
      const auto* p = find(key.pub, key.panel, pred);
      const auto* b = find(key.pub, key.panel, benchmark);
      if (!p || !b) continue;
      pv.push_back(p->value);
      bv.push_back(b->value);
      const int year = corpus.publication(*corpus.find_publication(key.pub)).year;
      by_year[year].first.push_back(p->value);
      by_year[year].second.push_back(b->value);
      by_panel[key.panel].first.push_back(p->value);
      by_panel[key.panel].second.push_back(b->value);
    }
    if (pv.empty()) throw Error("no graded rows to compare for " + std::string(indicator_name(pred)));
    cmp.publication_level = stats::diff_stats(pv, bv);
    for (const auto& [year, v] : by_year) cmp.by_year.emplace(year, stats::diff_stats(v.first, v.second));
    for (const auto& [panel, v] : by_panel) cmp.by_panel.emplace(panel, stats::diff_stats(v.first, v.second));

    std::vector<double> pa, ba;
    std::vector<Letter> pg, bg;
    for (const auto& a : authorships) {
      const auto* p = find(a.pub, a.panel, pred);
      const auto* b = find(a.pub, a.panel, benchmark);
      if (!p || !b) continue;
      pa.push_back(p->value);
      ba.push_back(b->value);
      pg.push_back(p->grade.letter);
      bg.push_back(b->grade.letter);
    }
    cmp.authorship_level = stats::diff_stats(pa, ba);
    cmp.all = stats::grade_confusion(pg, bg);

    const auto& sel = selections.at(pred);
    pg.clear();
    bg.clear();
    for (const auto& [researcher, picks] : sel.picks) {
      const auto& panel = corpus.researcher(*corpus.find_researcher(researcher)).panel;
      for (const auto& s : picks) {
        const auto* p = find(s.pub, panel, pred);
        const auto* b = find(s.pub, panel, benchmark);
        if (!p || !b) throw Error("selected publication '" + s.pub.str() + "' has no graded row");
        pg.push_back(p->grade.letter);
        bg.push_back(b->grade.letter);
      }
    }
    cmp.best_k = stats::grade_confusion(pg, bg);
    cmp.intersection = intersection_ratio(corpus, bench_sel, sel);

    rep.publication_rows = cmp.publication_level.n;
    rep.authorship_rows = cmp.authorship_level.n;
    rep.comparisons.push_back(std::move(cmp));
  }
  return rep;
}

// Correct/over/under columns: all authorships per predictor, then best-k per predictor.
struct ShareColumn {
  std::string label;
  stats::ShareTriple shares;
};

inline std::vector<ShareColumn> grading_share_table(const EvaluationReport& rep) {
  std::vector<ShareColumn> cols;
  for (const auto& c : rep.comparisons)
    cols.push_back({"all:" + std::string(indicator_name(c.predictor)), c.all.shares()});
  for (const auto& c : rep.comparisons)
    cols.push_back({"best" + std::to_string(rep.k) + ":" + std::string(indicator_name(c.predictor)), c.best_k.shares()});
  return cols;
}

// --- researcher report -----------------------------------------------------

struct ResearcherReportRow {
  PubId pub;
  double c_long = 0.0;
  double cj_minus_long = 0.0;
  double cshort_minus_long = 0.0;
};

inline std::vector<ResearcherReportRow> researcher_report(const Corpus& corpus,
                                                          std::span<const GradedPublication> graded,
                                                          const ResearcherId& researcher) {
  auto idx = corpus.find_researcher(researcher);
  if (!idx) throw Error("unknown researcher '" + researcher.str() + "'");
  const auto& panel = corpus.researcher(*idx).panel;
  const auto index = detail::index_graded(graded);
  auto value = [&](const PubId& pub, Indicator ind) -> std::optional<double> {
    auto it = index.find(detail::GradeKey{pub, panel, ind});
    if (it == index.end()) return std::nullopt;
    return it->second->value;
  };
  std::vector<ResearcherReportRow> rows;
  for (auto p : corpus.publications_of(*idx)) {
    const auto& pub = corpus.publication(p).id;
    auto lng = value(pub, Indicator::CLong);
    auto cj = value(pub, Indicator::CJ);
    auto sht = value(pub, Indicator::CShort);
    if (!lng || !cj || !sht) continue;
    rows.push_back({pub, *lng, *cj - *lng, *sht - *lng});
  }
  if (rows.empty()) throw Error("researcher '" + researcher.str() + "' has no scored publications");
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.c_long != b.c_long) return a.c_long > b.c_long;
    return a.pub < b.pub;
  });
  return rows;
}

inline void write_researcher_report(std::ostream& os, std::span<const ResearcherReportRow> rows) {
  csv::write_row(os, {"pub_id", "c_long", "cj_minus_c_long", "c_short_minus_c_long"});
  for (const auto& r : rows)
    csv::write_row(os, {r.pub.str(), csv::format_fixed(r.c_long), csv::format_fixed(r.cj_minus_long),
                        csv::format_fixed(r.cshort_minus_long)});
}

// --- serialization -----------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json opt(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json to_json(const stats::DiffStats& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["pearson"] = opt(s.pearson);
  j["spearman"] = opt(s.spearman);
  j["mean_abs_diff"] = s.mean_abs_diff;
  j["median_abs_diff"] = s.median_abs_diff;
  j["mode_bucket"] = stats::bucket_label(s.mode_bucket);
  j["mode_share"] = s.mode_share;
  j["std_dev"] = opt(s.std_dev);
  j["kurtosis"] = opt(s.kurtosis);
  j["skewness"] = opt(s.skewness);
  j["min"] = s.min;
  j["max"] = s.max;
  return j;
}

inline nlohmann::ordered_json to_json(const stats::ShareTriple& t) {
  nlohmann::ordered_json j;
  j["n"] = t.total();
  j["correct"] = t.correct;
  j["over"] = t.over;
  j["under"] = t.under;
  j["correct_pct"] = stats::format_basis_points(t.correct_bp);
  j["over_pct"] = stats::format_basis_points(t.over_bp);
  j["under_pct"] = stats::format_basis_points(t.under_bp);
  return j;
}

inline nlohmann::ordered_json to_json(const stats::ConfusionMatrix& m) {
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : m.counts) rows.push_back(row);
  j["counts"] = rows;
  j["shares"] = to_json(m.shares());
  return j;
}

inline nlohmann::ordered_json to_json(const IntersectionEntry& e) {
  nlohmann::ordered_json j;
  j["selected"] = e.selected;
  j["shared"] = e.shared;
  j["ratio"] = opt(e.ratio);
  return j;
}

// Fixed-precision text for optional statistics; "NA" when undefined.
inline std::string fmt(const std::optional<double>& v) { return v ? csv::format_fixed(*v) : "NA"; }

inline std::vector<std::string> stat_fields(const stats::DiffStats& s) {
  return {std::to_string(s.n), fmt(s.pearson), fmt(s.spearman), csv::format_fixed(s.mean_abs_diff),
          csv::format_fixed(s.median_abs_diff), stats::bucket_label(s.mode_bucket), csv::format_fixed(s.mode_share),
          fmt(s.std_dev), fmt(s.kurtosis), fmt(s.skewness), csv::format_fixed(s.min), csv::format_fixed(s.max)};
}

inline const std::vector<std::string> kStatHeader{"n",      "pearson", "spearman", "mean_abs_diff",
                                                  "median_abs_diff", "mode_bucket", "mode_share", "std_dev",
                                                  "kurtosis", "skewness", "min", "max"};

inline std::string comparison_name(const EvaluationReport& rep, const Comparison& c) {
  return std::string(indicator_name(c.predictor)) + " vs " + std::string(indicator_name(rep.benchmark));
}

}  // namespace detail

// report.json layout:
// { "benchmark", "k", "rows": {...},
//   "comparisons": [ { "predictor", "publication_level", "authorship_level",
//                      "by_year": {year: stats}, "by_panel": {panel: stats},
//                      "confusion_all", "confusion_best_k",
//                      "intersection": {"by_panel": {...}, "total": {...}} } ],
//   "grading_shares": [ {"column", correct/over/under...} ] }
inline nlohmann::ordered_json to_json(const EvaluationReport& rep) {
  using detail::to_json;
  nlohmann::ordered_json j;
  j["benchmark"] = indicator_name(rep.benchmark);
  j["k"] = rep.k;
  j["rows"] = {{"publication_level", rep.publication_rows},
               {"authorship_level", rep.authorship_rows},
               {"benchmark_best_k", rep.best_k_rows}};
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : rep.comparisons) {
    nlohmann::ordered_json cj;
    cj["predictor"] = indicator_name(c.predictor);
    cj["publication_level"] = to_json(c.publication_level);
    cj["authorship_level"] = to_json(c.authorship_level);
    nlohmann::ordered_json years = nlohmann::ordered_json::object();
    for (const auto& [y, s] : c.by_year) years[std::to_string(y)] = to_json(s);
    cj["by_year"] = years;
    nlohmann::ordered_json panels = nlohmann::ordered_json::object();
    for (const auto& [p, s] : c.by_panel) panels[p.str()] = to_json(s);
    cj["by_panel"] = panels;
    cj["confusion_all"] = to_json(c.all);
    cj["confusion_best_k"] = to_json(c.best_k);
    nlohmann::ordered_json inter;
    nlohmann::ordered_json ip = nlohmann::ordered_json::object();
    for (const auto& [p, e] : c.intersection.by_panel) ip[p.str()] = to_json(e);
    inter["by_panel"] = ip;
    inter["total"] = to_json(c.intersection.total);
    cj["intersection"] = inter;
    comps.push_back(cj);
  }
  j["comparisons"] = comps;
  auto shares = nlohmann::ordered_json::array();
  for (const auto& col : grading_share_table(rep)) {
    auto sj = to_json(col.shares);
    sj["column"] = col.label;
    shares.push_back(sj);
  }
  j["grading_shares"] = shares;
  return j;
}

// Writes report.json plus one flat CSV per table into `dir`.
inline void write_report(const EvaluationReport& rep, const std::filesystem::path& dir) {
  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write '" + (dir / name).string() + "'");
    return out;
  };
  {
    auto out = open("report.json");
    out << to_json(rep).dump(2) << '\n';
  }
  {
    auto out = open("diff_stats_overall.csv");
    std::vector<std::string> header{"comparison", "level"};
    header.insert(header.end(), detail::kStatHeader.begin(), detail::kStatHeader.end());
    csv::write_row(out, header);
    for (const auto& c : rep.comparisons) {
      for (const auto& [level, s] :
           {std::pair{"publication", &c.publication_level}, std::pair{"authorship", &c.authorship_level}}) {
        std::vector<std::string> row{detail::comparison_name(rep, c), level};
        auto f = detail::stat_fields(*s);
        row.insert(row.end(), f.begin(), f.end());
        csv::write_row(out, row);
      }
    }
  }
  {
    auto out = open("diff_stats_by_year.csv");
    std::vector<std::string> header{"comparison", "year"};
    header.insert(header.end(), detail::kStatHeader.begin(), detail::kStatHeader.end());
    csv::write_row(out, header);
    for (const auto& c : rep.comparisons)
      for (const auto& [y, s] : c.by_year) {
        std::vector<std::string> row{detail::comparison_name(rep, c), std::to_string(y)};
        auto f = detail::stat_fields(s);
        row.insert(row.end(), f.begin(), f.end());
        csv::write_row(out, row);
      }
  }
  {
    auto out = open("diff_stats_by_panel.csv");
    std::vector<std::string> header{"comparison", "panel_id"};
    header.insert(header.end(), detail::kStatHeader.begin(), detail::kStatHeader.end());
    csv::write_row(out, header);
    for (const auto& c : rep.comparisons)
      for (const auto& [p, s] : c.by_panel) {
        std::vector<std::string> row{detail::comparison_name(rep, c), p.str()};
        auto f = detail::stat_fields(s);
        row.insert(row.end(), f.begin(), f.end());
        csv::write_row(out, row);
      }
  }
  {
    auto out = open("confusion.csv");
    csv::write_row(out, {"predictor", "scope", "predictor_grade", "A", "B", "C", "D", "E"});
    for (const auto& c : rep.comparisons)
      for (const auto& [scope, m] : {std::pair{"all", &c.all}, std::pair{"best_k", &c.best_k}})
        for (std::size_t g = 0; g < 5; ++g) {
          std::vector<std::string> row{std::string(indicator_name(c.predictor)), scope, std::string(1, "ABCDE"[g])};
          for (auto v : m->counts[g]) row.push_back(std::to_string(v));
          csv::write_row(out, row);
        }
  }
  {
    auto out = open("grading_shares.csv");
    auto cols = grading_share_table(rep);
    std::vector<std::string> header{"grading"};
    for (const auto& c : cols) header.push_back(c.label);
    csv::write_row(out, header);
    std::vector<std::string> correct{"correct"}, over{"overgrading"}, under{"undergrading"};
    for (const auto& c : cols) {
      correct.push_back(stats::format_basis_points(c.shares.correct_bp));
      over.push_back(stats::format_basis_points(c.shares.over_bp));
      under.push_back(stats::format_basis_points(c.shares.under_bp));
    }
    csv::write_row(out, correct);
    csv::write_row(out, over);
    csv::write_row(out, under);
  }
  {
    auto out = open("intersection.csv");
    std::vector<std::string> header{"panel_id"};
    for (const auto& c : rep.comparisons)
      header.push_back(std::string(indicator_name(c.predictor)) + " & " + std::string(indicator_name(rep.benchmark)));
    csv::write_row(out, header);
    std::set<PanelId> panels;
    for (const auto& c : rep.comparisons)
      for (const auto& [p, e] : c.intersection.by_panel) panels.insert(p);
    auto cell = [](const IntersectionEntry* e) { return e ? detail::fmt(e->ratio) : std::string("NA"); };
    for (const auto& p : panels) {
      std::vector<std::string> row{p.str()};
      for (const auto& c : rep.comparisons) {
        auto it = c.intersection.by_panel.find(p);
        row.push_back(cell(it == c.intersection.by_panel.end() ? nullptr : &it->second));
      }
      csv::write_row(out, row);
    }
    std::vector<std::string> total{"total"};
    for (const auto& c : rep.comparisons) total.push_back(cell(&c.intersection.total));
    csv::write_row(out, total);
  }
}

}  // namespace vqr
