#include <gtest/gtest.h>

#include "support.hpp"

using namespace vqrtest;

namespace {

Corpus stratum_corpus(const std::vector<std::uint64_t>& cites) {
  std::vector<Publication> pubs;
  for (std::size_t i = 0; i < cites.size(); ++i)
    pubs.push_back(pub("P" + std::to_string(i), 2011, {"S1"}, "J1", {cites[i], cites[i]}));
  return Corpus::build({"a", "b"}, pubs, {metric("J1", 2011, "S1", 1.0), metric("J2", 2011, "S1", 2.0)}, {}, {});
}

}  // namespace

TEST(Midrank, PairCountingValues) {
  const std::vector<std::uint64_t> s{0, 2, 5, 5, 10};
  EXPECT_EQ(*midrank_percentile<std::uint64_t>(s, 10, true), 100.0);
  EXPECT_EQ(*midrank_percentile<std::uint64_t>(s, 5, true), 62.5);
  EXPECT_EQ(*midrank_percentile<std::uint64_t>(s, 0, true), 0.0);
  const std::vector<std::uint64_t> tied{3, 3, 3, 3};
  EXPECT_EQ(*midrank_percentile<std::uint64_t>(tied, 3, true), 50.0);
  const std::vector<std::uint64_t> alone{7};
  EXPECT_FALSE(midrank_percentile<std::uint64_t>(alone, 7, true));
}

TEST(CitationPercentile, SpecStratum) {
  auto c = stratum_corpus({0, 2, 5, 5, 10});
  EXPECT_EQ(citation_percentile(c, PubId("P4"), "a").value, 100.0);
  EXPECT_EQ(citation_percentile(c, PubId("P2"), "a").value, 62.5);
  EXPECT_EQ(citation_percentile(c, PubId("P3"), "b").value, 62.5);
}

TEST(CitationPercentile, AllTiedGetFifty) {
  auto c = stratum_corpus({4, 4, 4, 4, 4, 4});
  for (const auto& p : c.publications()) EXPECT_EQ(citation_percentile(c, p.id, "a").value, 50.0);
}

TEST(CitationPercentile, SingletonIsUndefined) {
  auto c = stratum_corpus({4});
  EXPECT_THROW(citation_percentile(c, PubId("P0"), "a"), UndefinedPercentile);
  auto t = percentile_table(c, "a");
  EXPECT_TRUE(t.rows.empty());
  ASSERT_EQ(t.failures.size(), 1u);
  EXPECT_EQ(t.failures[0].pub, PubId("P0"));
}

TEST(CitationPercentile, MostFavorableCategory) {
  // P1 is top in S2 but middling in S1
  auto c = Corpus::build({"a", "b"},
                         {pub("P1", 2011, {"S1", "S2"}, "J1", {5, 5}), pub("P2", 2011, {"S1"}, "J1", {9, 9}),
                          pub("P3", 2011, {"S2"}, "J1", {1, 1})},
                         {metric("J1", 2011, "S1", 1.0), metric("J2", 2011, "S1", 2.0)}, {}, {});
  auto r = citation_percentile(c, PubId("P1"), "a");
  EXPECT_EQ(r.value, 100.0);
  EXPECT_EQ(r.stratum.category, CategoryId("S2"));
}

TEST(JournalPercentile, Examples) {
  auto c = Corpus::build({"a", "b"}, {pub("P1", 2011, {"S1"}, "J3", {0, 0})},
                         {metric("J1", 2011, "S1", 1.0), metric("J2", 2011, "S1", 2.0), metric("J3", 2011, "S1", 3.0)},
                         {}, {});
  EXPECT_EQ(journal_percentile(c, JournalId("J3"), 2011).value, 100.0);
  EXPECT_EQ(journal_percentile(c, JournalId("J1"), 2011).value, 0.0);
  EXPECT_THROW(journal_percentile(c, JournalId("J3"), 2012), Error);
}

TEST(JournalPercentile, TwoCategoriesTakesBest) {
  // JX ranks 40 in S1 and 70 in S2
  std::vector<JournalMetric> m{metric("JX", 2011, "S1", 5.0), metric("JX", 2011, "S2", 5.0)};
  // S1: peers 1,2,8,9,9 -> (2*2+0)/(2*5) = 40
  for (auto [id, v] : std::vector<std::pair<std::string, double>>{{"A1", 1}, {"A2", 2}, {"A3", 8}, {"A4", 9}, {"A5", 9}})
    m.push_back(metric(id, 2011, "S1", v));
  // S2: peers 1,2,3,5,8 -> (2*3+1)/(2*5) = 70
  for (auto [id, v] : std::vector<std::pair<std::string, double>>{{"B1", 1}, {"B2", 2}, {"B3", 3}, {"B4", 5}, {"B5", 8}})
    m.push_back(metric(id, 2011, "S2", v));
  auto c = Corpus::build({"a", "b"}, {pub("P1", 2011, {"S1"}, "JX", {0, 0})}, m, {}, {});
  auto r = journal_percentile(c, JournalId("JX"), 2011);
  EXPECT_EQ(r.value, 70.0);
  EXPECT_EQ(r.stratum.category, CategoryId("S2"));
}

TEST(JournalPercentile, UniqueJournalIsUndefined) {
  auto c = Corpus::build({"a", "b"}, {pub("P1", 2011, {"S1"}, "J1", {0, 0})}, {metric("J1", 2011, "S1", 1.0)}, {}, {});
  EXPECT_THROW(journal_percentile(c, JournalId("J1"), 2011), UndefinedPercentile);
}

TEST(PercentileTable, AssessedOnly) {
  auto c = Corpus::build({"a", "b"},
                         {pub("P1", 2011, {"S1"}, "J1", {3, 3}), pub("P2", 2011, {"S1"}, "J1", {1, 1}, true),
                          pub("P3", 2011, {"S1"}, "J1", {2, 2}, true), pub("P4", 2011, {"S1"}, "J2", {5, 5}, true),
                          pub("P5", 2011, {"S1"}, "J2", {0, 0}, true)},
                         {metric("J1", 2011, "S1", 1.0), metric("J2", 2011, "S1", 2.0)}, {researcher("R1", "1")},
                         {authorship("R1", "P1")});
  auto t = percentile_table(c, "a", Population::Assessed);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].pub, PubId("P1"));
  EXPECT_EQ(t.rows[0].c, 75.0);
  EXPECT_EQ(percentile_table(c, "a", Population::World).rows.size(), 5u);
}

TEST(PercentileTable, MatchesPairwiseOracleExactly) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto c = random_tied_corpus(seed, 150 + 10 * seed);
    for (std::size_t census = 0; census < 2; ++census) {
      const auto& label = c.census_labels()[census];
      auto oracle = oracle_percentiles(c, census);
      auto table = percentile_table(c, label, Population::World, 3);
      std::size_t r = 0;
      for (std::size_t i = 0; i < c.publications().size(); ++i) {
        const auto& o = oracle[i];
        if (!o.c || !o.j) continue;
        ASSERT_LT(r, table.rows.size());
        const auto& row = table.rows[r++];
        ASSERT_EQ(row.pub, c.publications()[i].id);
        EXPECT_EQ(row.c, *o.c) << "seed " << seed;
        EXPECT_EQ(row.j, *o.j) << "seed " << seed;
      }
      EXPECT_EQ(r, table.rows.size());
      EXPECT_EQ(table.rows.size() + table.failures.size(), c.publications().size());
    }
  }
}

TEST(PercentileTable, BatchEqualsSingle) {
  auto c = random_tied_corpus(11, 120);
  auto t = percentile_table(c, "2020", Population::World);
  for (const auto& row : t.rows) {
    EXPECT_EQ(citation_percentile(c, row.pub, "2020").value, row.c);
    const auto& p = c.publication(*c.find_publication(row.pub));
    EXPECT_EQ(journal_percentile(c, p.journal, p.year).value, row.j);
  }
}

TEST(PercentileTable, JobsAndPermutationInvariant) {
  auto c = random_tied_corpus(5, 300);
  auto base = percentile_table(c, "2013", Population::World, 1);
  for (unsigned jobs : {2u, 4u, 7u}) {
    auto t = percentile_table(c, "2013", Population::World, jobs);
    EXPECT_EQ(t.rows, base.rows);
    EXPECT_EQ(t.failures, base.failures);
  }
  std::vector<Publication> pubs(c.publications().begin(), c.publications().end());
  std::reverse(pubs.begin(), pubs.end());
  auto shuffled = Corpus::build(c.census_labels(), pubs, {c.journal_metrics().begin(), c.journal_metrics().end()},
                                {c.researchers().begin(), c.researchers().end()},
                                {c.authorships().begin(), c.authorships().end()});
  EXPECT_EQ(percentile_table(shuffled, "2013", Population::World).rows, base.rows);
}

TEST(PercentileProperties, StratumMeanIsFifty) {
  auto c = stratum_corpus({0, 0, 0, 1, 1, 4, 9, 9, 9, 9, 30});
  double sum = 0;
  for (const auto& p : c.publications()) sum += citation_percentile(c, p.id, "a").value;
  EXPECT_DOUBLE_EQ(sum / static_cast<double>(c.publications().size()), 50.0);
}

TEST(PercentileProperties, IncreasingTransformInvariant) {
  const std::vector<std::uint64_t> base{0, 1, 1, 3, 7, 7, 20};
  std::vector<std::uint64_t> squared;
  for (auto v : base) squared.push_back(v * v + 5);
  auto a = stratum_corpus(base);
  auto b = stratum_corpus(squared);
  for (const auto& p : a.publications())
    EXPECT_EQ(citation_percentile(a, p.id, "a").value, citation_percentile(b, p.id, "a").value);
}

TEST(PercentileProperties, AddingWeakerPeerNeverLowersTarget) {
  std::vector<std::uint64_t> s{0, 2, 5, 5, 10};
  auto before = citation_percentile(stratum_corpus(s), PubId("P2"), "a").value;
  s.push_back(1);
  auto after = citation_percentile(stratum_corpus(s), PubId("P2"), "a").value;
  EXPECT_GE(after, before);
}
