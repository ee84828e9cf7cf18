#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vqr/panels.hpp"
#include "vqr/parallel.hpp"
#include "vqr/pipeline.hpp"
#include "vqr/synthgen.hpp"

namespace vqr {

struct RunOutcome {
  std::uint64_t seed = 0;
  std::optional<double> pearson_short;  // C_short vs C_long, publication level
  std::optional<double> pearson_cj;     // C-J vs C_long
  std::uint64_t correct_short = 0;      // authorships graded identically to C_long
  std::uint64_t correct_cj = 0;
  std::uint64_t authorships = 0;
};

struct GridPointResult {
  GenModel model;
  std::vector<RunOutcome> runs;  // ascending seed
  double pearson_win_rate = 0.0;  // share of runs where C_short beats C-J; ties count half
  double grading_win_rate = 0.0;
  std::size_t pearson_wins = 0;   // strict
  std::size_t grading_wins = 0;   // strict
};

// 1 for a strict win of `a`, 0.5 for a tie, 0 otherwise. An undefined
// correlation loses to a defined one.
inline double win_score(const std::optional<double>& a, const std::optional<double>& b) {
  if (a && b) return *a > *b ? 1.0 : (*a == *b ? 0.5 : 0.0);
  if (a) return 1.0;
  if (b) return 0.0;
  return 0.5;
}

inline RunOutcome run_once(const GenModel& model, const PanelSet& panels, std::size_t k) {
  const auto corpus = generate(model);
  PipelineOptions opt;
  opt.k = k;
  const auto result = run_pipeline(corpus, panels, opt);
  RunOutcome out;
  out.seed = model.seed;
  for (const auto& c : result.report.comparisons) {
    const auto shares = c.all.shares();
    if (c.predictor == Indicator::CShort) {
      out.pearson_short = c.publication_level.pearson;
      out.correct_short = shares.correct;
    } else if (c.predictor == Indicator::CJ) {
      out.pearson_cj = c.publication_level.pearson;
      out.correct_cj = shares.correct;
    }
    out.authorships = shares.total();
  }
  return out;
}

// For every grid point, runs seeds model.seed .. model.seed + repetitions - 1.
inline std::vector<GridPointResult> replication_experiment(const std::vector<GenModel>& grid, const PanelSet& panels,
                                                           std::size_t repetitions, std::size_t k = 2,
                                                           unsigned jobs = 1) {
  std::vector<GridPointResult> results(grid.size());
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    grid[g].validate();
    results[g].model = grid[g];
    results[g].runs.resize(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) tasks.emplace_back(g, r);
  }
  parallel_for(tasks.size(), jobs, [&](std::size_t t) {
    const auto [g, r] = tasks[t];
    GenModel m = grid[g];
    m.seed = grid[g].seed + r;
    results[g].runs[r] = run_once(m, panels, k);
  });
  for (auto& res : results) {
    double p = 0.0, q = 0.0;
    for (const auto& run : res.runs) {
      const double ps = win_score(run.pearson_short, run.pearson_cj);
      const double gs = run.correct_short > run.correct_cj ? 1.0 : (run.correct_short == run.correct_cj ? 0.5 : 0.0);
      p += ps;
      q += gs;
      res.pearson_wins += ps == 1.0;
      res.grading_wins += gs == 1.0;
    }
    if (!res.runs.empty()) {
      res.pearson_win_rate = p / static_cast<double>(res.runs.size());
      res.grading_win_rate = q / static_cast<double>(res.runs.size());
    }
  }
  return results;
}

}  // namespace vqr
