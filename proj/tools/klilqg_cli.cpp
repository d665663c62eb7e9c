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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "klilqg/errors.hpp"
#include "klilqg/harness.hpp"
#include "klilqg/ilqg.hpp"
#include "klilqg/oracles.hpp"

namespace fs = std::filesystem;
using namespace klilqg;

namespace {

struct CommonOptions {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out = ".";
  std::string format = "csv";
  CLI::Option* out_option = nullptr;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&o](const std::uint64_t& s) {
        o.seed = s;
        o.seed_given = true;
      },
      "override the seed");
  o.out_option = cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

fs::path write_output(const CommonOptions& o, const std::string& stem, const std::string& text) {
  fs::create_directories(o.out);
  const fs::path path = fs::path(o.out) / (stem + "." + o.format);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << text;
  return path;
}

int cmd_run(const CommonOptions& o) {
  SessionConfig config = o.config.empty() ? SessionConfig{} : load_session(o.config);
  if (o.seed_given) config.seed = o.seed;
  validate_session(config);
  const SessionResult result = run_session(config);
  const std::string text =
      o.format == "json" ? session_json(result, config) : session_csv(result);
  const fs::path path = write_output(o, "session", text);
  if (result.converged) {
    std::printf("converged at iteration %d, %.4f mm remaining\n", result.converged_iteration,
                result.remaining_distance_mm);
  } else {
    std::printf("not converged after %zu iterations, %.4f mm remaining%s\n",
                result.records.size(), result.remaining_distance_mm,
                result.aborted ? " (aborted)" : "");
  }
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_sweep(const CommonOptions& o, int threads) {
  SweepConfig config = o.config.empty() ? SweepConfig{} : load_sweep(o.config);
  if (o.seed_given) config.seeds = {o.seed};
  if (threads >= 0) config.threads = static_cast<unsigned>(threads);
  validate_sweep(config);
  const auto cells = run_sweep(config);
  const std::string text = o.format == "json" ? sweep_json(cells) : sweep_csv(cells);
  const fs::path path = write_output(o, "sweep", text);
  int converged = 0;
  int failed = 0;
  for (const auto& c : cells) {
    converged += c.outcome == CellOutcome::kConverged;
    failed += c.outcome == CellOutcome::kFailed;
  }
  std::printf("%zu cells: %d converged, %d failed\n", cells.size(), converged, failed);
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

double relative_error(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-12);
}

// Backward pass on exact LQ models against the Riccati solution.
int cmd_lqr_check(const CommonOptions& o, int cases, double tolerance) {
  std::mt19937_64 rng(o.seed_given ? o.seed : 1);
  std::uniform_int_distribution<int> n_dist(1, 4);
  std::uniform_int_distribution<int> m_dist(1, 2);
  std::normal_distribution<double> normal;
  constexpr int kHorizon = 20;

  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "case,state_dim,action_dim,gain_rel_error,offset_rel_error,pass\n";
  int failures = 0;
  for (int c = 0; c < cases; ++c) {
    const int n = n_dist(rng);
    const int m = m_dist(rng);
    const oracle::LQProblem problem = oracle::random_lq_problem(rng, n, m, kHorizon);
    const oracle::LqrSolution reference = oracle::riccati_lqr(problem);

    // Any nominal works for exact models; use a random open-loop one.
    NominalTrajectory nominal;
    Vector x = Vector::NullaryExpr(n, [&](Eigen::Index) { return normal(rng); });
    nominal.mean_states.push_back(x);
    for (int t = 0; t < kHorizon; ++t) {
      const Vector u = Vector::NullaryExpr(m, [&](Eigen::Index) { return normal(rng); });
      x = problem.A * x + problem.B * u + problem.c;
      nominal.mean_actions.push_back(u);
      nominal.mean_states.push_back(x);
    }
    const oracle::LqModels models = oracle::lq_models(problem, nominal);
    const BackwardPassResult bp = backward_pass(models.dynamics, models.cost, nominal);

    double gain_err = bp.ok() ? 0.0 : INFINITY;
    double offset_err = gain_err;
    if (bp.ok()) {
      for (int t = 0; t < kHorizon; ++t) {
        gain_err = std::max(gain_err, relative_error(bp.policy.gains[t], reference.K[t]));
        offset_err = std::max(offset_err, relative_error(bp.policy.offsets[t], reference.k[t]));
      }
    }
    const bool pass = gain_err < tolerance && offset_err < tolerance;
    failures += !pass;
    csv << c << ',' << n << ',' << m << ',' << gain_err << ',' << offset_err << ','
        << (pass ? 1 : 0) << '\n';
    rows.push_back({{"case", c},
                    {"state_dim", n},
                    {"action_dim", m},
                    {"gain_rel_error", gain_err},
                    {"offset_rel_error", offset_err},
                    {"pass", pass}});
    std::printf("case %2d n=%d m=%d gain %.3e offset %.3e %s\n", c, n, m, gain_err, offset_err,
                pass ? "ok" : "FAIL");
  }
  if (o.out_option->count() > 0) {
    const std::string text = o.format == "json" ? rows.dump(2) + "\n" : csv.str();
    std::printf("wrote %s\n", write_output(o, "lqr_check", text).string().c_str());
  }
  std::printf("%d/%d cases within %.0e\n", cases - failures, cases, tolerance);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KL-constrained iLQG with learned local models"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "run one learning session");
  add_common(run, run_opts);

  CommonOptions sweep_opts;
  int threads = -1;
  CLI::App* sweep = app.add_subcommand("sweep", "run the parameter grid");
  add_common(sweep, sweep_opts);
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");

  CommonOptions lqr_opts;
  int cases = 20;
  double tolerance = 1e-6;
  CLI::App* lqr = app.add_subcommand("lqr-check", "compare the backward pass with Riccati");
  add_common(lqr, lqr_opts);
  lqr->add_option("--cases", cases, "random problems")->capture_default_str()->check(
      CLI::PositiveNumber);
  lqr->add_option("--tolerance", tolerance, "relative error bound")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts);
    if (*sweep) return cmd_sweep(sweep_opts, threads);
    if (*lqr) return cmd_lqr_check(lqr_opts, cases, tolerance);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
