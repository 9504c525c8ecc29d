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
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "tqaoa/circuits.hpp"
#include "tqaoa/finance.hpp"
#include "tqaoa/optimizer.hpp"
#include "tqaoa/problem.hpp"
#include "tqaoa/simulator.hpp"

namespace tqaoa {

/// gamma in [0, pi], beta >= 0, one pair per layer.
struct QaoaParams {
  std::vector<double> gamma;
  std::vector<double> beta;

  int depth() const { return static_cast<int>(gamma.size()); }
  void validate() const;
  /// (gamma_1..gamma_p, beta_1..beta_p)
  std::vector<double> flatten() const;
  static QaoaParams unflatten(const std::vector<double>& x);
  nlohmann::json to_json() const;
  static QaoaParams from_json(const nlohmann::json& j);
};

/// gamma reflected into [0, pi], beta clamped at 0.
QaoaParams project_params(QaoaParams params);

struct StatevectorBackend {};
struct SampledBackend {
  std::uint64_t shots = 8192;
  std::uint64_t seed = 0;
};
/// The objective uses the exact diagonal of rho; shots (if nonzero) only
/// apply to the reported metrics.
struct DensityBackend {
  double eta = 0.0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};
using Backend = std::variant<StatevectorBackend, SampledBackend, DensityBackend>;

std::string backend_name(const Backend& b);

enum class OptimizerKind { kSimplex, kFiniteDifference };
std::string_view to_string(OptimizerKind kind);
/// Gradient method for the exact statevector, simplex otherwise.
OptimizerKind default_optimizer(const Backend& b);

struct GridSpec {
  double m1_min = 0.05;
  double m1_max = 2.0;
  double m2_min = 0.05;
  double m2_max = 2.0;
  int resolution = 40;

  std::vector<double> m1_values() const;
  std::vector<double> m2_values() const;
  nlohmann::json to_json() const;
};

struct QaoaConfig {
  MixerKind mixer = MixerKind::kStandard;
  int depth = 1;
  Backend backend = StatevectorBackend{};
  OptimizerKind optimizer = OptimizerKind::kFiniteDifference;
  GridSpec grid;
  int evaluations_per_layer = 500;
  double tolerance = 1e-8;

  void validate(int n_assets) const;
};

/// Initial-state preparation followed by p layers.
GateSequence assemble_ansatz(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config,
                             const QaoaParams& params);

/// Initial-state circuit for a mixer.
GateSequence initial_state_circuit(MixerKind mixer, int n_assets, int budget);
/// The p parameterized layers only.
GateSequence ansatz_body(const CostCoefficients& coeffs, MixerKind mixer, const QaoaParams& params);

/// Reusable evaluation context for one (instance, penalty, config): the
/// prepared initial state, the cost table and the feasible-set summary are
/// computed once.
class Evaluator {
 public:
  Evaluator(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config);

  /// sum_x p(x) lambda F^(A)(decode(x)) on the configured backend.
  double objective(const QaoaParams& params) const;
  /// Exact output distribution (statevector, or density-matrix diagonal).
  std::vector<double> exact_distribution(const QaoaParams& params) const;
  /// Distribution the metrics are computed from: exact on the statevector,
  /// empirical when the backend carries shots.
  std::vector<double> reported_distribution(const QaoaParams& params) const;
  DistributionMetrics metrics(const QaoaParams& params) const;

  const QaoaConfig& config() const { return config_; }
  const CostCoefficients& coefficients() const { return coeffs_; }
  const FeasibleSetSummary& summary() const { return summary_; }
  const EncodedLandscape& landscape() const { return landscape_; }
  /// lambda F^(A) per basis index.
  const std::vector<double>& scaled_cost() const { return scaled_cost_; }

 private:
  std::vector<double> sample(const std::vector<double>& exact, std::uint64_t shots, std::uint64_t seed) const;

  PortfolioInstance instance_;
  PenaltyModel penalty_;
  QaoaConfig config_;
  CostCoefficients coeffs_;
  FeasibleSetSummary summary_;
  EncodedLandscape landscape_;
  std::vector<double> scaled_cost_;
  std::optional<StateVector> initial_sv_;
  std::optional<DensityMatrix> initial_dm_;
};

double evaluate_objective(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config,
                          const QaoaParams& params);

/// gamma_i = m1 x_i, beta_i = m2 (1 - x_i), x_i = (2i - 1) / (2p).
QaoaParams linear_ramp_params(int p, double m1, double m2);
std::vector<double> ramp_positions(int p);

struct GridResult {
  double m1 = 0.0;
  double m2 = 0.0;
  double objective = 0.0;
  std::vector<double> m1_values;
  std::vector<double> m2_values;
  Eigen::MatrixXd landscape;  // rows m1, columns m2
};

GridResult grid_search_p1(const Evaluator& evaluator, const GridSpec& grid);
GridResult grid_search_p1(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config,
                          const GridSpec& grid);
void write_landscape_csv(std::ostream& os, const GridResult& grid);

enum class TransferStrategy { kInterpolate, kAppendLast, kAppendZero, kRampFit };
inline constexpr TransferStrategy kAllTransferStrategies[] = {
    TransferStrategy::kInterpolate, TransferStrategy::kAppendLast, TransferStrategy::kAppendZero,
    TransferStrategy::kRampFit};
std::string_view to_string(TransferStrategy s);

/// Depth p-1 schedule -> depth p starting point.
QaoaParams transfer_params(const QaoaParams& prev, TransferStrategy strategy);

struct TraceEntry {
  QaoaParams params;
  double objective = 0.0;
};

struct OptimizationTrace {
  std::vector<TraceEntry> iterations;
  QaoaParams best_params;
  double best_objective = 0.0;
  int evaluations_count = 0;
  bool converged = false;

  void record(const QaoaParams& params, double objective);
  /// One JSON object per evaluation.
  void write_jsonl(std::ostream& os) const;
};

class OptimizationAbortError : public Error {
 public:
  OptimizationAbortError(const std::string& what, OptimizationTrace trace)
      : Error(ErrorCode::kOptimizationAbort, what), trace_(std::move(trace)) {}
  const OptimizationTrace& trace() const { return trace_; }

 private:
  OptimizationTrace trace_;
};

OptimizationTrace optimize(const Evaluator& evaluator, const QaoaParams& initial);
OptimizationTrace optimize(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config,
                           const QaoaParams& initial);

/// One depth of a warm-started sweep.
struct DepthResult {
  int p = 0;
  QaoaParams params;
  double objective = 0.0;
  DistributionMetrics metrics;
  std::string start;  // "grid" or the winning transfer strategy
  int evaluations = 0;
  double wall_time = 0.0;  // seconds spent on this depth
};

/// p = 1 starts from the linear-ramp grid minimum. Each further depth builds
/// the four transfer candidates from the previous optimum; with
/// `optimize_all_starts` every candidate is optimized and the lowest final
/// objective kept, otherwise only the candidate with the lowest starting
/// objective is optimized.
std::vector<DepthResult> depth_sweep(const Evaluator& evaluator, int max_depth, bool optimize_all_starts = true);
std::vector<DepthResult> depth_sweep(const PortfolioInstance& instance, const PenaltyModel& penalty,
                                     const QaoaConfig& config, int max_depth, bool optimize_all_starts = true);

}  // namespace tqaoa
