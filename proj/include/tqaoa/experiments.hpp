// Copyright 2026 The tqaoa Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqaoa/circuits.hpp"
#include "tqaoa/finance.hpp"
#include "tqaoa/qaoa.hpp"

namespace tqaoa {

struct NamedInstance {
  std::string id;
  PortfolioInstance instance;
};

/// `count` synthetic instances, instance k seeded with mix_seed(master_seed, k).
std::vector<NamedInstance> random_instances(int n_assets, int budget, double q, int count, std::uint64_t master_seed);

enum class BackendChoice { kStatevector, kSampled, kDensity };
std::string_view to_string(BackendChoice b);
BackendChoice backend_from_string(std::string_view name);

struct ExperimentSpec {
  std::vector<NamedInstance> instances;
  std::vector<MixerKind> mixers;
  std::vector<int> depths;
  BackendChoice backend = BackendChoice::kStatevector;
  std::uint64_t shots = 8192;
  std::vector<double> etas{0.0};
  std::uint64_t master_seed = 0;
  GridSpec grid;
  int workers = 1;
  /// Extra simplex evaluations per layer on the noisy backend, starting from
  /// the noiseless optimum. Zero evaluates the transferred angles directly.
  int refine_evaluations = 0;
  bool optimize_all_starts = true;

  void validate() const;
};

struct RunResult {
  std::string instance_id;
  MixerKind mixer = MixerKind::kStandard;
  int p = 0;
  double eta = 0.0;
  std::uint64_t shots = 0;  // 0 = exact distribution
  std::string backend;
  double r_bar = 0.0;
  double p_opt = 0.0;
  double objective = 0.0;
  double penalty_a = 0.0;
  QaoaParams best_params;
  std::string start;
  double wall_time = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t seed = 0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

/// Rows sorted by (instance, mixer, p, eta).
void sort_results(std::vector<RunResult>& rows);

/// Noiseless or sampled depth sweep, one row per (instance, mixer, p).
std::vector<RunResult> run_sweep(const ExperimentSpec& spec);

/// Density-matrix evaluation on every eta in `spec.etas`, one row per
/// (instance, mixer, p, eta). Angles come from a noiseless statevector sweep.
std::vector<RunResult> run_noise_sweep(const ExperimentSpec& spec);

/// Index of the first grid point at which `reference[k] >= others[m][k]` for
/// every m, or nullopt.
std::optional<std::size_t> find_crossover(const std::vector<double>& reference,
                                          const std::vector<std::vector<double>>& others);

struct CrossoverEntry {
  int p = 0;
  std::string metric;  // "r_bar" or "p_opt"
  std::optional<double> eta;
};

/// Standard against the XY-family mixers (QAMPA excluded), on the
/// instance-mean metric curves.
std::vector<CrossoverEntry> crossover_report(const std::vector<RunResult>& rows);
nlohmann::json to_json(const std::vector<CrossoverEntry>& entries);

struct AggregateRow {
  MixerKind mixer = MixerKind::kStandard;
  int p = 0;
  double eta = 0.0;
  std::size_t count = 0;
  double r_bar_mean = 0.0;
  double r_bar_std = 0.0;  // sample standard deviation, 0 for one row
  double p_opt_mean = 0.0;
  double p_opt_std = 0.0;
};
std::vector<AggregateRow> aggregate(const std::vector<RunResult>& rows);

struct DickeNoiseRow {
  double eta = 0.0;
  double p_feasible_exact = 0.0;
  double p_feasible = 0.0;  // from shots
  double stderr_binomial = 0.0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};
/// Probability of a budget-B outcome after the noisy Dicke preparation.
std::vector<DickeNoiseRow> run_dicke_noise(int n_assets, int budget, const std::vector<double>& etas,
                                           std::uint64_t shots, std::uint64_t master_seed);

struct CircuitReportRow {
  std::string component;  // "uniform-initial", "dicke-initial", or a mixer name
  int n_assets = 0;
  int budget = 0;
  int p = 0;
  CircuitStats stats;
};
/// Initial-state circuits and one ansatz layer per mixer for every N in
/// [n_min, n_max] with B = floor(N / 2).
std::vector<CircuitReportRow> circuit_report(int n_min, int n_max, double q, std::uint64_t seed);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// ---- CSV output --------------------------------------------------------

struct CsvSchema {
  std::vector<std::string> columns;
  std::vector<bool> numeric;
};

const CsvSchema& run_result_schema();
const CsvSchema& aggregate_schema();
const CsvSchema& dicke_noise_schema();
const CsvSchema& circuit_report_schema();

/// `# tqaoa <version> <command line>` followed by the header row.
void write_csv_preamble(std::ostream& os, const std::string& invocation, const CsvSchema& schema);
void write_rows(std::ostream& os, const std::vector<RunResult>& rows);
void write_rows(std::ostream& os, const std::vector<AggregateRow>& rows);
void write_rows(std::ostream& os, const std::vector<DickeNoiseRow>& rows);
void write_rows(std::ostream& os, const std::vector<CircuitReportRow>& rows);

/// Re-reads an emitted file: comment preamble, exact header, field count and
/// numeric parse of every numeric column. Throws kData on the first problem.
void validate_csv(const std::filesystem::path& path, const CsvSchema& schema);

}  // namespace tqaoa
