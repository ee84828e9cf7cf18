#include <gtest/gtest.h>

#include <json.hpp>

#include "support.hpp"

using namespace vqrtest;

namespace {

Corpus three_pubs() {
  return Corpus::build({"a", "b"},
                       {pub("P1", 2011, {"S1"}, "J1", {0, 0}), pub("P2", 2012, {"S1"}, "J1", {0, 0}),
                        pub("P3", 2012, {"S1"}, "J1", {0, 0})},
                       {metric("J1", 2011, "S1", 1.0), metric("J1", 2012, "S1", 1.0)},
                       {researcher("R1", "1"), researcher("R2", "2"), researcher("R3", "2")},
                       {authorship("R1", "P1"), authorship("R1", "P2"), authorship("R2", "P2"), authorship("R2", "P3")});
}

GradedPublication row(std::string p, std::string panel, Indicator ind, double v, double c = 0) {
  GradedPublication g;
  g.pub = PubId(std::move(p));
  g.panel = PanelId(std::move(panel));
  g.indicator = ind;
  g.value = v;
  g.world_percentile = v;
  g.grade = grade(v);
  g.c_percentile = c;
  return g;
}

std::vector<GradedPublication> three_pub_grades() {
  using I = Indicator;
  std::vector<GradedPublication> g{
      row("P1", "1", I::CLong, 10), row("P1", "1", I::CShort, 12), row("P1", "1", I::CJ, 30),
      row("P2", "1", I::CLong, 95), row("P2", "1", I::CShort, 80), row("P2", "1", I::CJ, 75),
      row("P2", "2", I::CLong, 95), row("P2", "2", I::CShort, 80), row("P2", "2", I::CJ, 85),
      row("P3", "2", I::CLong, 50), row("P3", "2", I::CShort, 55), row("P3", "2", I::CJ, 40),
  };
  std::stable_sort(g.begin(), g.end(), graded_key_less);
  return g;
}

std::map<Indicator, SelectionSet> selections(const Corpus& c, const std::vector<GradedPublication>& g, std::size_t k) {
  std::map<Indicator, SelectionSet> out;
  for (auto ind : kAllIndicators) out.emplace(ind, select_best_k(c, g, ind, k));
  return out;
}

}  // namespace

TEST(ResearcherReport, Deltas) {
  auto c = three_pubs();
  auto g = three_pub_grades();
  auto rows = researcher_report(c, g, ResearcherId("R1"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].pub, PubId("P2"));  // descending C_long
  EXPECT_EQ(rows[1].pub, PubId("P1"));
  EXPECT_EQ(rows[1].c_long, 10);
  EXPECT_EQ(rows[1].cj_minus_long, 20);
  EXPECT_EQ(rows[1].cshort_minus_long, 2);

  // same publication through a panel-2 researcher uses the panel-2 C-J value
  auto r2 = researcher_report(c, g, ResearcherId("R2"));
  EXPECT_EQ(r2[0].pub, PubId("P2"));
  EXPECT_EQ(r2[0].cj_minus_long, -10);

  std::ostringstream out;
  write_researcher_report(out, rows);
  EXPECT_EQ(out.str(),
            "pub_id,c_long,cj_minus_c_long,c_short_minus_c_long\n"
            "P2,95.000000,-20.000000,-15.000000\n"
            "P1,10.000000,20.000000,2.000000\n");
}

TEST(ResearcherReport, AgreementGivesZeroDeltas) {
  auto c = three_pubs();
  std::vector<GradedPublication> g{row("P1", "1", Indicator::CLong, 40), row("P1", "1", Indicator::CShort, 40),
                                   row("P1", "1", Indicator::CJ, 40)};
  auto rows = researcher_report(c, g, ResearcherId("R1"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].cj_minus_long, 0);
  EXPECT_EQ(rows[0].cshort_minus_long, 0);
}

TEST(ResearcherReport, Errors) {
  auto c = three_pubs();
  auto g = three_pub_grades();
  try {
    researcher_report(c, g, ResearcherId("R9"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("R9"), std::string::npos);
  }
  EXPECT_THROW(researcher_report(c, g, ResearcherId("R3")), Error);  // no publications
}

TEST(Evaluate, HandCounts) {
  auto c = three_pubs();
  auto g = three_pub_grades();
  auto sel = selections(c, g, 1);
  const std::vector<Indicator> preds{Indicator::CShort, Indicator::CJ};
  auto rep = evaluate(c, g, Indicator::CLong, preds, sel);
  EXPECT_EQ(rep.publication_rows, 4u);  // (P1,1) (P2,1) (P2,2) (P3,2)
  EXPECT_EQ(rep.authorship_rows, 4u);
  ASSERT_EQ(rep.comparisons.size(), 2u);
  // C_short grades: P1 E (12) vs E (10); P2 B (80) vs A (95) twice; P3 C vs C
  const auto s = rep.comparisons[0].all.shares();
  EXPECT_EQ(s.correct, 2u);
  EXPECT_EQ(s.under, 2u);
  EXPECT_EQ(s.over, 0u);
  // C-J grades: P1 D (30) vs E: over; P2/1 B vs A: under; P2/2 B vs A: under; P3 D (40) vs C: under
  const auto j = rep.comparisons[1].all.shares();
  EXPECT_EQ(j.over, 1u);
  EXPECT_EQ(j.under, 3u);
  EXPECT_EQ(j.over_bp, 2500);
  // best-1: every indicator picks P2 for both R1 and R2
  EXPECT_EQ(rep.comparisons[0].intersection.total.ratio, 1.0);
  EXPECT_EQ(rep.comparisons[1].intersection.total.ratio, 1.0);
  EXPECT_EQ(rep.best_k_rows, 2u);
}

TEST(Evaluate, IdentityPredictorIsAllCorrect) {
  auto m = GenModel{};
  m.n_publications = 2000;
  m.researchers_per_panel = 15;
  auto c = generate(m);
  auto panels = table1_panels();
  panels.window = YearWindow{2004, 2006};
  panels.slope_year_offset = 7;
  PipelineOptions opt;
  opt.predictors = {Indicator::CLong, Indicator::CShort};
  auto r = run_pipeline(c, panels, opt);
  const auto& id = r.report.comparisons[0];
  EXPECT_EQ(id.all.shares().correct_bp, 10000);
  EXPECT_EQ(id.best_k.shares().correct_bp, 10000);
  EXPECT_EQ(id.intersection.total.ratio, 1.0);
  EXPECT_EQ(*id.publication_level.pearson, 1.0);
  EXPECT_EQ(id.publication_level.mean_abs_diff, 0.0);

  for (const auto& cmp : r.report.comparisons) {
    EXPECT_EQ(cmp.all.total(), r.report.authorship_rows);
    std::size_t year_n = 0, panel_n = 0;
    for (const auto& [y, s] : cmp.by_year) year_n += s.n;
    for (const auto& [p, s] : cmp.by_panel) panel_n += s.n;
    EXPECT_EQ(year_n, cmp.publication_level.n);
    EXPECT_EQ(panel_n, cmp.publication_level.n);
  }
  for (const auto& col : grading_share_table(r.report))
    EXPECT_EQ(col.shares.correct_bp + col.shares.over_bp + col.shares.under_bp, 10000) << col.label;
}

TEST(Evaluate, ReportFiles) {
  auto c = three_pubs();
  auto g = three_pub_grades();
  const std::vector<Indicator> preds{Indicator::CShort, Indicator::CJ};
  auto rep = evaluate(c, g, Indicator::CLong, preds, selections(c, g, 1));
  TempDir dir("report");
  write_report(rep, dir.path());
  for (const char* f : {"report.json", "diff_stats_overall.csv", "diff_stats_by_year.csv", "diff_stats_by_panel.csv",
                        "confusion.csv", "grading_shares.csv", "intersection.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
  auto j = nlohmann::json::parse(slurp(dir.path() / "report.json"));
  EXPECT_EQ(j["benchmark"], "C_long");
  EXPECT_EQ(slurp(dir.path() / "grading_shares.csv"),
            "grading,all:C_short,all:C-J,best1:C_short,best1:C-J\n"
            "correct,50.00,0.00,0.00,0.00\n"
            "overgrading,0.00,25.00,0.00,0.00\n"
            "undergrading,50.00,75.00,100.00,100.00\n");
}
