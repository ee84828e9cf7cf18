#pragma once

// Seeded synthetic corpora. Each publication has a latent quality z ~ N(0,1).
// Its citations at the last census are Poisson with a lognormal mean
// exp(quality_mu + quality_sigma * z); earlier censuses keep a random
// fraction of those (binomial thinning), so counts never decrease. The
// journal a publication appears in is chosen by ranking
// rho_J * z + sqrt(1 - rho_J^2) * e, so the journal metric predicts latent
// quality with strength rho_J.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "vqr/config.hpp"
#include "vqr/corpus.hpp"
#include "vqr/error.hpp"
#include "vqr/random.hpp"

namespace vqr {

enum class JournalMode {
  Latent,       // journals ranked by a noisy copy of latent quality
  MirrorShort,  // one journal per publication whose metric is its first-census citation count
};

struct GenModel {
  std::uint64_t seed = 1;
  std::size_t n_publications = 10000;
  std::vector<int> years{2004, 2005, 2006};
  std::size_t n_categories = 8;
  std::size_t journals_per_category = 25;
  double multi_category_share = 0.1;  // journals listed under a second category
  std::vector<std::string> census_labels{"2008", "2015"};

  double quality_mu = 1.8;
  double quality_sigma = 1.0;
  double short_capture = 0.35;        // mean share of final citations present at the first census, first year
  double short_capture_decay = 0.75;  // multiplier per later publication year
  double short_noise = 1.0;           // logit-scale spread of the per-publication share
  double journal_informativeness = 0.3;
  double journal_metric_sigma = 0.8;
  JournalMode journal_mode = JournalMode::Latent;

  std::vector<std::string> panels{"1", "2", "3", "4", "5", "6", "7", "8a", "9"};
  std::size_t researchers_per_panel = 60;
  double pubs_per_researcher_mean = 6.0;
  std::size_t max_pubs_per_researcher = 40;
  double cross_panel_share = 0.1;
  std::size_t n_institutions = 20;

  void validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("invalid generator model: " + what); };
    if (n_publications < 1) fail("n_publications must be >= 1");
    if (years.empty()) fail("years must not be empty");
    if (n_categories < 1) fail("n_categories must be >= 1");
    if (journal_mode == JournalMode::Latent && journals_per_category < 2)
      fail("journals_per_category must be >= 2 so every journal has a peer");
    if (census_labels.size() < 2) fail("need at least two census labels");
    if (!(quality_sigma >= 0.0) || !(short_noise >= 0.0) || !(journal_metric_sigma >= 0.0))
      fail("noise levels must be >= 0");
    if (!(short_capture > 0.0) || !(short_capture_decay > 0.0)) fail("short_capture and decay must be > 0");
    if (!(journal_informativeness >= 0.0 && journal_informativeness <= 1.0))
      fail("journal_informativeness must lie in [0, 1]");
    if (!(multi_category_share >= 0.0 && multi_category_share <= 1.0)) fail("multi_category_share must lie in [0, 1]");
    if (!(cross_panel_share >= 0.0 && cross_panel_share <= 1.0)) fail("cross_panel_share must lie in [0, 1]");
    if (panels.empty() || researchers_per_panel < 1) fail("need at least one panel with one researcher");
    if (!(pubs_per_researcher_mean >= 1.0)) fail("pubs_per_researcher_mean must be >= 1");
    if (max_pubs_per_researcher < 1) fail("max_pubs_per_researcher must be >= 1");
    if (max_pubs_per_researcher > n_publications)
      fail("max_pubs_per_researcher (" + std::to_string(max_pubs_per_researcher) + ") exceeds n_publications (" +
           std::to_string(n_publications) + ")");
    if (n_institutions < 1) fail("n_institutions must be >= 1");
  }
};

namespace detail {

inline std::string padded(char prefix, std::size_t n, int width) {
  std::string digits = std::to_string(n);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

inline int digits_for(std::size_t n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace detail

inline Corpus generate(const GenModel& m) {
  m.validate();
  Rng rng(m.seed);
  const std::size_t n = m.n_publications;
  const int pub_width = detail::digits_for(n);

  std::vector<CategoryId> categories;
  for (std::size_t c = 0; c < m.n_categories; ++c)
    categories.emplace_back(detail::padded('S', c + 1, detail::digits_for(m.n_categories)));

  struct Draft {
    int year_index = 0;
    std::size_t primary = 0;
    double quality = 0.0;
    double journal_signal = 0.0;
    std::vector<std::uint64_t> citations;
  };
  std::vector<Draft> drafts(n);
  const double rho = m.journal_informativeness;
  const double rho_c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  const std::size_t labels = m.census_labels.size();
  for (auto& d : drafts) {
    d.year_index = static_cast<int>(rng.below(m.years.size()));
    d.primary = static_cast<std::size_t>(rng.below(m.n_categories));
    d.quality = rng.normal();
    d.journal_signal = rho * d.quality + rho_c * rng.normal();

    d.citations.assign(labels, 0);
    const double mean = std::exp(m.quality_mu + m.quality_sigma * d.quality);
    d.citations[labels - 1] = rng.poisson(mean);
    const double base = std::min(1.0, m.short_capture * std::pow(m.short_capture_decay, d.year_index));
    double share = 1.0;
    if (base < 1.0) share = detail::sigmoid(std::log(base / (1.0 - base)) + m.short_noise * rng.normal());
    // equal thinning steps compose to `share` between the first and last census
    const double step = labels > 2 ? std::pow(share, 1.0 / static_cast<double>(labels - 1)) : share;
    for (std::size_t k = labels - 1; k-- > 0;) d.citations[k] = rng.binomial(d.citations[k + 1], step);
  }

  std::vector<Publication> pubs(n);
  std::vector<JournalMetric> metrics;

  if (m.journal_mode == JournalMode::MirrorShort) {
    for (std::size_t i = 0; i < n; ++i) {
      auto& p = pubs[i];
      const auto& d = drafts[i];
      p.id = PubId(detail::padded('P', i + 1, pub_width));
      p.year = m.years[static_cast<std::size_t>(d.year_index)];
      p.categories = {categories[d.primary]};
      p.journal = JournalId("J" + p.id.str().substr(1));
      p.citations = d.citations;
      metrics.push_back(JournalMetric{p.journal, p.year, categories[d.primary], static_cast<double>(d.citations[0])});
    }
  } else {
    // Journals: a primary category, sometimes a second one, and a latent
    // prestige that sets the metric each year.
    struct JournalDraft {
      JournalId id;
      std::vector<std::size_t> cats;
      double prestige = 0.0;
    };
    const std::size_t n_journals = m.n_categories * m.journals_per_category;
    const int jw = detail::digits_for(n_journals);
    std::vector<JournalDraft> journals(n_journals);
    for (std::size_t j = 0; j < n_journals; ++j) {
      auto& jd = journals[j];
      jd.id = JournalId(detail::padded('J', j + 1, jw));
      jd.cats.push_back(j / m.journals_per_category);
      if (m.n_categories > 1 && rng.bernoulli(m.multi_category_share)) {
        auto other = static_cast<std::size_t>(rng.below(m.n_categories - 1));
        if (other >= jd.cats.front()) ++other;
        jd.cats.push_back(other);
      }
      jd.prestige = rng.normal();
    }
    // metric[j][y]
    std::vector<std::vector<double>> metric(n_journals, std::vector<double>(m.years.size()));
    for (std::size_t j = 0; j < n_journals; ++j)
      for (std::size_t y = 0; y < m.years.size(); ++y) {
        // round to 3 decimals like published impact factors
        const double raw = std::exp(m.journal_metric_sigma * (journals[j].prestige + 0.1 * rng.normal()));
        metric[j][y] = std::round(raw * 1000.0) / 1000.0;
      }
    for (std::size_t j = 0; j < n_journals; ++j)
      for (std::size_t y = 0; y < m.years.size(); ++y)
        for (auto c : journals[j].cats)
          metrics.push_back(JournalMetric{journals[j].id, m.years[y], categories[c], metric[j][y]});

    // Within each (year, primary category), publications ranked by their
    // journal signal fill the category's journals from the highest metric down.
    std::map<std::pair<int, std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[{drafts[i].year_index, drafts[i].primary}].push_back(i);
    std::vector<std::size_t> journal_of(n);
    for (auto& [key, members] : groups) {
      const auto [y, c] = key;
      std::vector<std::size_t> js(m.journals_per_category);
      std::iota(js.begin(), js.end(), c * m.journals_per_category);
      std::stable_sort(js.begin(), js.end(), [&](std::size_t a, std::size_t b) {
        return metric[a][static_cast<std::size_t>(y)] > metric[b][static_cast<std::size_t>(y)];
      });
      std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        return drafts[a].journal_signal > drafts[b].journal_signal;
      });
      for (std::size_t r = 0; r < members.size(); ++r) journal_of[members[r]] = js[r * js.size() / members.size()];
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto& p = pubs[i];
      const auto& d = drafts[i];
      const auto& jd = journals[journal_of[i]];
      p.id = PubId(detail::padded('P', i + 1, pub_width));
      p.year = m.years[static_cast<std::size_t>(d.year_index)];
      for (auto c : jd.cats) p.categories.push_back(categories[c]);
      p.journal = jd.id;
      p.citations = d.citations;
    }
  }

  // Researchers and authorships.
  std::vector<std::vector<std::size_t>> by_category(m.n_categories);
  for (std::size_t i = 0; i < n; ++i) by_category[drafts[i].primary].push_back(i);

  std::vector<Researcher> researchers;
  std::vector<Authorship> authorships;
  std::vector<bool> authored(n, false);
  const std::size_t n_researchers = m.panels.size() * m.researchers_per_panel;
  const int rw = detail::digits_for(n_researchers);
  const int iw = detail::digits_for(m.n_institutions);
  std::size_t rid = 0;
  for (std::size_t pi = 0; pi < m.panels.size(); ++pi) {
    const auto& home = by_category[pi % m.n_categories];
    for (std::size_t r = 0; r < m.researchers_per_panel; ++r) {
      Researcher who{ResearcherId(detail::padded('R', ++rid, rw)), PanelId(m.panels[pi]),
                     InstitutionId(detail::padded('U', rng.below(m.n_institutions) + 1, iw))};
      const auto want = std::min<std::size_t>(
          m.max_pubs_per_researcher, 1 + static_cast<std::size_t>(rng.poisson(m.pubs_per_researcher_mean - 1.0)));
      std::set<std::size_t> chosen;
      std::size_t home_left = home.size();
      while (chosen.size() < want) {
        std::size_t pick;
        if (home_left > 0 && !rng.bernoulli(m.cross_panel_share)) {
          pick = home[rng.below(home.size())];
          if (!chosen.contains(pick) && std::binary_search(home.begin(), home.end(), pick)) --home_left;
        } else {
          pick = static_cast<std::size_t>(rng.below(n));
          if (!chosen.contains(pick) && std::binary_search(home.begin(), home.end(), pick)) --home_left;
        }
        chosen.insert(pick);
      }
      for (auto i : chosen) {
        authored[i] = true;
        authorships.push_back(Authorship{who.id, pubs[i].id});
      }
      researchers.push_back(std::move(who));
    }
  }
  for (std::size_t i = 0; i < n; ++i) pubs[i].reference_only = !authored[i];

  return Corpus::build(m.census_labels, std::move(pubs), std::move(metrics), std::move(researchers),
                       std::move(authorships));
}

// genmodel.toml: a single [model] section whose keys are the GenModel field
// names; `journal_mode` is "latent" or "mirror_short".
inline GenModel parse_genmodel(const config::Document& doc, GenModel m = {}) {
  for (const auto& s : doc.sections) {
    if (s.path.empty()) {
      if (!s.entries.empty()) doc.fail(s.entries.front().second.line, "keys must appear inside [model]");
      continue;
    }
    if (s.path != std::vector<std::string>{"model"}) doc.fail(s.line, "unknown section");
    for (const auto& [key, v] : s.entries) {
      auto count = [&](const char* name) {
        double x = doc.number(v, name);
        if (x < 0 || x != std::floor(x)) doc.fail(v.line, std::string("'") + name + "' must be a non-negative integer");
        return static_cast<std::size_t>(x);
      };
      if (key == "seed") m.seed = count("seed");
      else if (key == "n_publications") m.n_publications = count("n_publications");
      else if (key == "years") {
        m.years.clear();
        for (double y : doc.numbers(v, key)) m.years.push_back(static_cast<int>(y));
      } else if (key == "n_categories") m.n_categories = count("n_categories");
      else if (key == "journals_per_category") m.journals_per_category = count("journals_per_category");
      else if (key == "multi_category_share") m.multi_category_share = doc.number(v, key);
      else if (key == "census_labels") m.census_labels = doc.strings(v, key);
      else if (key == "quality_mu") m.quality_mu = doc.number(v, key);
      else if (key == "quality_sigma") m.quality_sigma = doc.number(v, key);
      else if (key == "short_capture") m.short_capture = doc.number(v, key);
      else if (key == "short_capture_decay") m.short_capture_decay = doc.number(v, key);
      else if (key == "short_noise") m.short_noise = doc.number(v, key);
      else if (key == "journal_informativeness") m.journal_informativeness = doc.number(v, key);
      else if (key == "journal_metric_sigma") m.journal_metric_sigma = doc.number(v, key);
      else if (key == "journal_mode") {
        auto mode = doc.string(v, key);
        if (mode == "latent") m.journal_mode = JournalMode::Latent;
        else if (mode == "mirror_short") m.journal_mode = JournalMode::MirrorShort;
        else doc.fail(v.line, "journal_mode must be \"latent\" or \"mirror_short\"");
      } else if (key == "panels") m.panels = doc.strings(v, key);
      else if (key == "researchers_per_panel") m.researchers_per_panel = count("researchers_per_panel");
      else if (key == "pubs_per_researcher_mean") m.pubs_per_researcher_mean = doc.number(v, key);
      else if (key == "max_pubs_per_researcher") m.max_pubs_per_researcher = count("max_pubs_per_researcher");
      else if (key == "cross_panel_share") m.cross_panel_share = doc.number(v, key);
      else if (key == "n_institutions") m.n_institutions = count("n_institutions");
      else doc.fail(v.line, "unknown model key '" + key + "'");
    }
  }
  m.validate();
  return m;
}

inline GenModel load_genmodel(const std::string& path) { return parse_genmodel(config::parse_file(path)); }

}  // namespace vqr
