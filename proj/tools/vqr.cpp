// Command-line driver. Each subcommand runs one stage and reads the CSV
// artifacts earlier stages left in --out, so a pipeline can be resumed or
// inspected between steps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vqr/vqr.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string corpus_dir;
  std::string panels;
  std::string short_census;
  std::string long_census;
  std::vector<std::string> indicators;
  std::string benchmark = "C_long";
  std::size_t k = 2;
  std::string out = ".";
  unsigned jobs = 1;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string model;
  std::string researcher;
  std::size_t repetitions = 100;
};

// Holds <out>/.vqr.lock for the lifetime of a command.
class OutputLock {
 public:
  explicit OutputLock(const fs::path& dir) : path_(dir / ".vqr.lock") {
    fs::create_directories(dir);
    std::FILE* f = std::fopen(path_.string().c_str(), "wx");
    if (!f) {
      throw vqr::Error("output directory '" + dir.string() + "' is locked by another run (remove '" +
                       path_.string() + "' if stale)");
    }
    std::fclose(f);
  }
  ~OutputLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  fs::path path_;
};

vqr::PanelSet load_panels(const Options& o) {
  return o.panels.empty() ? vqr::table1_panels() : vqr::load_panels(o.panels);
}

vqr::Corpus load_corpus(const Options& o, const vqr::PanelSet& panels) {
  if (o.corpus_dir.empty()) throw vqr::Error("--corpus-dir is required");
  vqr::IngestOptions opt;
  opt.window = panels.window;
  opt.known_panels = panels.ids();
  return vqr::ingest(vqr::CorpusFiles::in_directory(o.corpus_dir), opt);
}

std::vector<vqr::Indicator> parse_indicators(const std::vector<std::string>& names,
                                             std::vector<vqr::Indicator> fallback) {
  if (names.empty()) return fallback;
  std::vector<vqr::Indicator> out;
  for (const auto& n : names) {
    auto ind = vqr::parse_indicator(n);
    if (std::find(out.begin(), out.end(), ind) == out.end()) out.push_back(ind);
  }
  return out;
}

const std::vector<vqr::Indicator> kAll{vqr::Indicator::CShort, vqr::Indicator::CLong, vqr::Indicator::CJ};

std::vector<const vqr::PercentileTable*> in_census_order(const vqr::Corpus& corpus,
                                                         const std::vector<vqr::PercentileTable>& tables) {
  std::vector<const vqr::PercentileTable*> out;
  for (std::size_t i = 0; i < corpus.census_labels().size(); ++i) out.push_back(&tables[i]);
  return out;
}

void cmd_ingest(const Options& o) {
  const auto panels = load_panels(o);
  const auto corpus = load_corpus(o, panels);
  OutputLock lock(o.out);
  const auto summary = vqr::corpus_summary(corpus);
  vqr::artifacts::write_summary(fs::path(o.out) / "corpus_summary.csv", summary);
  std::cout << "ingested " << corpus.publications().size() << " publications, " << corpus.journal_metrics().size()
            << " journal metrics, " << corpus.researchers().size() << " researchers, "
            << corpus.authorships().size() << " authorships\n";
}

void cmd_percentiles(const Options& o) {
  const auto panels = load_panels(o);
  const auto corpus = load_corpus(o, panels);
  OutputLock lock(o.out);
  std::vector<vqr::PercentileTable> world;
  for (const auto& label : corpus.census_labels())
    world.push_back(vqr::percentile_table(corpus, label, vqr::Population::World, o.jobs));
  std::vector<vqr::PercentileTable> assessed;
  for (const auto& t : world) assessed.push_back(vqr::assessed_only(corpus, t));

  const fs::path out(o.out);
  vqr::artifacts::write_percentiles(out / "percentiles.csv", in_census_order(corpus, assessed));
  vqr::artifacts::write_percentiles(out / "world_percentiles.csv", in_census_order(corpus, world));
  vqr::artifacts::write_failures(out / "undefined_percentiles.csv", in_census_order(corpus, world));
  std::size_t undefined = 0;
  for (const auto& t : assessed) undefined += t.failures.size();
  if (undefined > 0) {
    std::cerr << "warning: undefined-percentile: " << undefined
              << " assessed (publication, census) pairs have no percentile; see " << (out / "undefined_percentiles.csv").string()
              << "\n";
  }
}

void cmd_score(const Options& o) {
  const auto panels = load_panels(o);
  const auto corpus = load_corpus(o, panels);
  OutputLock lock(o.out);
  const fs::path out(o.out);
  const auto census = vqr::resolve_census(corpus, o.short_census, o.long_census);
  const auto tables = vqr::artifacts::read_percentiles(out / "percentiles.csv");
  const auto& shorts = vqr::artifacts::table_for(tables, census.short_label, "percentiles.csv");
  vqr::artifacts::write_scores(out / "scores.csv", vqr::score_corpus(corpus, shorts, panels));
}

void cmd_grade(const Options& o) {
  const auto panels = load_panels(o);
  const auto corpus = load_corpus(o, panels);
  OutputLock lock(o.out);
  const fs::path out(o.out);
  const auto census = vqr::resolve_census(corpus, o.short_census, o.long_census);
  const auto world = vqr::artifacts::read_percentiles(out / "world_percentiles.csv");
  const auto graded = vqr::grade_corpus(corpus, vqr::artifacts::table_for(world, census.short_label, "world_percentiles.csv"),
                                        vqr::artifacts::table_for(world, census.long_label, "world_percentiles.csv"),
                                        panels, parse_indicators(o.indicators, kAll), o.jobs);
  vqr::artifacts::write_grades(out / "grades.csv", graded);
}

std::vector<vqr::GradedPublication> load_grades(const Options& o, const vqr::Corpus& corpus) {
  const fs::path out(o.out);
  const auto census = vqr::resolve_census(corpus, o.short_census, o.long_census);
  const auto percentiles = vqr::artifacts::read_percentiles(out / "world_percentiles.csv");
  return vqr::artifacts::read_grades(out / "grades.csv", percentiles, census);
}

void cmd_select(const Options& o) {
  const auto panels = load_panels(o);
  const auto corpus = load_corpus(o, panels);
  OutputLock lock(o.out);
  if (o.k == 0) throw vqr::Error("--k must be at least 1");
  const auto graded = load_grades(o, corpus);
  std::set<vqr::Indicator> present;
  for (const auto& g : graded) present.insert(g.indicator);
  std::vector<vqr::SelectionSet> sets;
  for (auto ind : parse_indicators(o.indicators, kAll)) {
    if (!present.contains(ind))
      throw vqr::Error("grades.csv has no rows for indicator '" + std::string(vqr::indicator_name(ind)) + "'");
    sets.push_back(vqr::select_best_k(corpus, graded, ind, o.k));
  }
  std::vector<const vqr::SelectionSet*> ptrs;
  for (const auto& s : sets) ptrs.push_back(&s);
  vqr::artifacts::write_selections(fs::path(o.out) / "selections.csv", ptrs);
  for (const auto& s : sets)
    if (!s.without_publications.empty())
      std::cerr << "note: " << s.indicator << ": " << s.without_publications.size()
                << " researchers have no scored publications\n";
}

void cmd_compare(const Options& o) {
  const auto panels = load_panels(o);
  const auto corpus = load_corpus(o, panels);
  OutputLock lock(o.out);
  if (o.k == 0) throw vqr::Error("--k must be at least 1");
  const auto graded = load_grades(o, corpus);
  const auto benchmark = vqr::parse_indicator(o.benchmark);
  const auto predictors = parse_indicators(o.indicators, {vqr::Indicator::CShort, vqr::Indicator::CJ});
  auto selections = vqr::artifacts::read_selections(fs::path(o.out) / "selections.csv", corpus, o.k);
  auto need = predictors;
  need.push_back(benchmark);
  for (auto ind : need)
    if (!selections.contains(ind))
      throw vqr::Error("selections.csv has no rows for indicator '" + std::string(vqr::indicator_name(ind)) + "'");
  const auto report = vqr::evaluate(corpus, graded, benchmark, predictors, selections);
  vqr::write_report(report, o.out);
  for (const auto& col : vqr::grading_share_table(report)) {
    std::cout << col.label << ": correct " << vqr::stats::format_basis_points(col.shares.correct_bp) << "%, over "
              << vqr::stats::format_basis_points(col.shares.over_bp) << "%, under "
              << vqr::stats::format_basis_points(col.shares.under_bp) << "%\n";
  }
}

void cmd_report(const Options& o) {
  const auto panels = load_panels(o);
  const auto corpus = load_corpus(o, panels);
  OutputLock lock(o.out);
  if (o.researcher.empty()) throw vqr::Error("--researcher is required");
  const auto graded = load_grades(o, corpus);
  const auto rows = vqr::researcher_report(corpus, graded, vqr::ResearcherId(o.researcher));
  const auto path = fs::path(o.out) / ("researcher_" + o.researcher + ".csv");
  auto out = vqr::artifacts::open_out(path);
  vqr::write_researcher_report(out, rows);
}

vqr::GenModel load_model(const Options& o) {
  vqr::GenModel m = o.model.empty() ? vqr::GenModel{} : vqr::load_genmodel(o.model);
  if (o.seed_given) m.seed = o.seed;
  m.validate();
  return m;
}

void cmd_synth(const Options& o) {
  const auto model = load_model(o);
  OutputLock lock(o.out);
  const auto corpus = vqr::generate(model);
  vqr::write_corpus(corpus, vqr::CorpusFiles::in_directory(o.out));
  std::cout << "generated " << corpus.publications().size() << " publications, " << corpus.researchers().size()
            << " researchers, " << corpus.authorships().size() << " authorships (seed " << model.seed << ")\n";
}

void cmd_replicate(const Options& o) {
  const auto model = load_model(o);
  const auto panels = load_panels(o);
  OutputLock lock(o.out);
  const auto results = vqr::replication_experiment({model}, panels, o.repetitions, o.k, o.jobs);
  auto out = vqr::artifacts::open_out(fs::path(o.out) / "replication.csv");
  vqr::csv::write_row(out, {"seed", "pearson_c_short", "pearson_cj", "correct_c_short", "correct_cj", "authorships"});
  auto opt = [](const std::optional<double>& v) { return v ? vqr::format_exact(*v) : std::string("NA"); };
  for (const auto& r : results.front().runs)
    vqr::csv::write_row(out, {std::to_string(r.seed), opt(r.pearson_short), opt(r.pearson_cj),
                              std::to_string(r.correct_short), std::to_string(r.correct_cj),
                              std::to_string(r.authorships)});
  const auto& res = results.front();
  std::cout << "runs: " << res.runs.size() << "\n"
            << "pearson: C_short beats C-J in " << res.pearson_wins << " runs (win rate "
            << vqr::csv::format_fixed(res.pearson_win_rate, 4) << ")\n"
            << "grading: C_short beats C-J in " << res.grading_wins << " runs (win rate "
            << vqr::csv::format_fixed(res.grading_win_rate, 4) << ")\n";
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const vqr::ParseError*>(&e)) return "parse";
  if (dynamic_cast<const vqr::IntegrityError*>(&e)) return "integrity";
  if (dynamic_cast<const vqr::UndefinedPercentile*>(&e)) return "undefined-percentile";
  if (dynamic_cast<const vqr::ConfigError*>(&e)) return "config";
  return "error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Citation / journal-metric scoring engine and predictive-power harness"};
  app.require_subcommand(1);
  Options o;

  auto add_corpus = [&](CLI::App* c) {
    c->add_option("--corpus-dir", o.corpus_dir, "Directory holding publications/journals/researchers/authorships.csv");
    c->add_option("--panels", o.panels, "Panel configuration file (default: built-in 2011-2013 slopes)");
  };
  auto add_census = [&](CLI::App* c) {
    c->add_option("--short-census", o.short_census, "Census label of the short window (default: first)");
    c->add_option("--long-census", o.long_census, "Census label of the benchmark window (default: last)");
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory")->capture_default_str(); };
  auto add_jobs = [&](CLI::App* c) {
    c->add_option("--jobs", o.jobs, "Worker threads; outputs do not depend on it")->check(CLI::PositiveNumber);
  };
  auto add_model = [&](CLI::App* c) {
    c->add_option("--model", o.model, "Generator model file (genmodel.toml)");
    c->add_option("--seed", o.seed, "Random seed (overrides the model file)")->each([&](const std::string&) {
      o.seed_given = true;
    });
  };

  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and write corpus_summary.csv");
  add_corpus(ingest);
  add_out(ingest);

  auto* percentiles = app.add_subcommand("percentiles", "Write percentiles.csv and world_percentiles.csv");
  add_corpus(percentiles);
  add_out(percentiles);
  add_jobs(percentiles);

  auto* score = app.add_subcommand("score", "Write scores.csv (combined C-J scores per publication and panel)");
  add_corpus(score);
  add_census(score);
  add_out(score);

  auto* grade = app.add_subcommand("grade", "Write grades.csv");
  add_corpus(grade);
  add_census(grade);
  add_out(grade);
  add_jobs(grade);
  grade->add_option("--indicators", o.indicators, "Indicators to grade (C_short, C_long, C-J)")->delimiter(',');

  auto* select = app.add_subcommand("select", "Write selections.csv (best k per researcher)");
  add_corpus(select);
  add_census(select);
  add_out(select);
  select->add_option("--indicators", o.indicators, "Indicators to select by")->delimiter(',');
  select->add_option("--k", o.k, "Publications per researcher")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Write report.json and the comparison tables");
  add_corpus(compare);
  add_census(compare);
  add_out(compare);
  compare->add_option("--indicators", o.indicators, "Predictor indicators (default C_short,C-J)")->delimiter(',');
  compare->add_option("--benchmark", o.benchmark, "Benchmark indicator")->capture_default_str();
  compare->add_option("--k", o.k, "k used by the select stage")->capture_default_str();

  auto* report = app.add_subcommand("report", "Write researcher_<id>.csv for one researcher");
  add_corpus(report);
  add_census(report);
  add_out(report);
  report->add_option("--researcher", o.researcher, "Researcher id")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus (four CSV files)");
  add_model(synth);
  add_out(synth);

  auto* replicate = app.add_subcommand("replicate", "Compare C_short and C-J over many synthetic corpora");
  add_model(replicate);
  replicate->add_option("--panels", o.panels, "Panel configuration file");
  replicate->add_option("--repetitions", o.repetitions, "Seeds per model")->capture_default_str();
  replicate->add_option("--k", o.k, "Publications per researcher")->capture_default_str();
  add_out(replicate);
  add_jobs(replicate);

  auto* run = app.add_subcommand("run", "Run ingest through compare in one go");
  add_corpus(run);
  add_census(run);
  add_out(run);
  add_jobs(run);
  run->add_option("--indicators", o.indicators, "Predictor indicators (default C_short,C-J)")->delimiter(',');
  run->add_option("--benchmark", o.benchmark, "Benchmark indicator")->capture_default_str();
  run->add_option("--k", o.k, "Publications per researcher")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ingest) cmd_ingest(o);
    else if (*percentiles) cmd_percentiles(o);
    else if (*score) cmd_score(o);
    else if (*grade) cmd_grade(o);
    else if (*select) cmd_select(o);
    else if (*compare) cmd_compare(o);
    else if (*report) cmd_report(o);
    else if (*synth) cmd_synth(o);
    else if (*replicate) cmd_replicate(o);
    else if (*run) {
      // --indicators names the predictors; grading and selection cover all three
      Options all = o;
      all.indicators.clear();
      cmd_ingest(o);
      cmd_percentiles(o);
      cmd_score(o);
      cmd_grade(all);
      cmd_select(all);
      cmd_compare(o);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << error_kind(e) << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
