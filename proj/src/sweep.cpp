// Copyright 2026 The klilqg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "klilqg/harness.hpp"

namespace klilqg {

std::string outcome_name(CellOutcome outcome) {
  switch (outcome) {
    case CellOutcome::kConverged:
      return "converged";
    case CellOutcome::kRemaining:
      return "remaining";
    case CellOutcome::kFailed:
      return "failed";
  }
  return "failed";
}

SessionConfig cell_config(const SessionConfig& base, double cov_ini, double v, double alpha,
                          double eps_ini, std::uint64_t seed) {
  SessionConfig c = base;
  c.exploration.cov_ini = cov_ini;
  c.cost.v = v;
  c.cost.alpha = alpha;
  c.solver.epsilon_ini = eps_ini;
  c.seed = seed;
  return c;
}

SweepCell summarize_cell(const std::vector<SweepCell>& runs) {
  std::vector<SweepCell> sorted = runs;
  auto rank = [](const SweepCell& c) {
    return c.outcome == CellOutcome::kConverged ? 0 : c.outcome == CellOutcome::kRemaining ? 1 : 2;
  };
  std::stable_sort(sorted.begin(), sorted.end(), [&](const SweepCell& a, const SweepCell& b) {
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    if (rank(a) == 0) return a.iterations < b.iterations;
    if (rank(a) == 1) return a.remaining_mm < b.remaining_mm;
    return false;
  });
  return sorted[(sorted.size() - 1) / 2];
}

namespace {

SweepCell run_one(const SessionConfig& config, double cov_ini, double v, double alpha,
                  double eps_ini) {
  SweepCell cell;
  cell.cov_ini = cov_ini;
  cell.v = v;
  cell.alpha = alpha;
  cell.eps_ini = eps_ini;
  cell.seed = config.seed;
  try {
    const SessionResult r = run_session(config);
    cell.remaining_mm = r.remaining_distance_mm;
    if (r.converged) {
      cell.outcome = CellOutcome::kConverged;
      cell.iterations = r.converged_iteration;
    } else {
      cell.outcome = CellOutcome::kRemaining;
      cell.iterations = static_cast<int>(r.records.size());
    }
  } catch (const std::exception& e) {
    cell.outcome = CellOutcome::kFailed;
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

std::vector<SweepCell> run_sweep(const SweepConfig& config) {
  validate_sweep(config);
  struct Job {
    double cov_ini, v, alpha, eps_ini;
    std::size_t cell;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  std::size_t cell_count = 0;
  for (double cov : config.cov_ini) {
    for (double v : config.v) {
      for (double eps : config.eps_ini) {
        for (double alpha : config.alpha) {
          for (std::uint64_t seed : config.seeds) jobs.push_back({cov, v, alpha, eps, cell_count, seed});
          ++cell_count;
        }
      }
    }
  }
  // Results land in fixed slots so the table never depends on scheduling.
  std::vector<SweepCell> runs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      runs[i] = run_one(cell_config(config.base, j.cov_ini, j.v, j.alpha, j.eps_ini, j.seed),
                        j.cov_ini, j.v, j.alpha, j.eps_ini);
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<SweepCell> cells;
  cells.reserve(cell_count);
  const std::size_t per_cell = config.seeds.size();
  for (std::size_t c = 0; c < cell_count; ++c) {
    std::vector<SweepCell> group(runs.begin() + c * per_cell, runs.begin() + (c + 1) * per_cell);
    cells.push_back(summarize_cell(group));
  }
  return cells;
}

}  // namespace klilqg
