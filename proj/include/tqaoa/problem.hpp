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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tqaoa/error.hpp"
#include "tqaoa/finance.hpp"

namespace tqaoa {

/// Per-asset position: +1 long, 0 no position, -1 short.
class TernaryPortfolio {
 public:
  TernaryPortfolio() = default;
  explicit TernaryPortfolio(std::vector<int> z);

  /// Parses strings like "+-0+0".
  static TernaryPortfolio parse(std::string_view text);

  int size() const { return static_cast<int>(z_.size()); }
  int operator[](int i) const { return z_[static_cast<std::size_t>(i)]; }
  std::span<const int> values() const { return z_; }
  int sum() const;
  std::string to_string() const;

  auto operator<=>(const TernaryPortfolio&) const = default;

 private:
  std::vector<int> z_;
};

/// 2N-qubit computational basis state laid out (x1-, x1+, ..., xN-, xN+).
/// Position k is bit k of `bits` and maps to qubit k of the simulators.
struct EncodedBitstring {
  std::uint64_t bits = 0;
  int n_qubits = 0;

  bool bit(int k) const { return ((bits >> k) & 1U) != 0; }
  /// Character k is position k ("0"/"1").
  std::string to_string() const;
  static EncodedBitstring parse(std::string_view text);
};

/// Position-ordered string <-> basis index helpers. Qiskit prints qubit 0
/// rightmost; these convert between the two conventions.
std::string index_to_bitstring(std::uint64_t index, int n_qubits);
std::uint64_t bitstring_to_index(std::string_view bits);
std::string reverse_bit_order(std::string_view bits);

inline int short_qubit(int asset) { return 2 * asset; }
inline int long_qubit(int asset) { return 2 * asset + 1; }

/// z_i = x_i^+ - x_i^-. Throws kShape for odd length.
TernaryPortfolio decode(const EncodedBitstring& bits);
TernaryPortfolio decode_index(std::uint64_t index, int n_assets);
/// Canonical encoding; no-position maps to (0,0).
EncodedBitstring encode(const TernaryPortfolio& z);

struct PenaltyModel {
  double coefficient_a = 0.0;
  int budget = 0;
};

struct FeasibleSetSummary {
  double f_min = 0.0;
  double f_max = 0.0;
  std::vector<TernaryPortfolio> argmin_set;
  std::size_t feasible_count = 0;  // distinct ternary vectors
  int budget = 0;
  bool degenerate = false;         // f_min == f_max

  nlohmann::json to_json() const;
};

/// q * sum_ij sigma_ij z_i z_j - (1 - q) * sum_i mu_i z_i
double cost(const PortfolioInstance& instance, const TernaryPortfolio& z);
/// cost(z) + A (sum_i z_i - B)^2
double penalized_cost(const PortfolioInstance& instance, const TernaryPortfolio& z, const PenaltyModel& penalty);

inline constexpr int kMaxEnumerationAssets = 16;

/// Exhaustive scan of all 3^N ternary vectors restricted to sum(z) = B.
/// The penalty is accepted for interface symmetry; it vanishes on the
/// feasible set.
FeasibleSetSummary enumerate_feasible(const PortfolioInstance& instance,
                                      const std::optional<PenaltyModel>& penalty = std::nullopt);

/// Number of encoded bitstrings whose decoded portfolio is feasible:
/// C(2N, N + B).
std::uint64_t feasible_encoding_count(int n_assets, int budget);

/// One pass of the penalty search, kept for diagnostics.
struct PenaltyIteration {
  double a = 0.0;
  double feasible_min = 0.0;
  double feasible_mean = 0.0;
  double infeasible_min = 0.0;
  TernaryPortfolio infeasible_argmin;
};

struct PenaltyEstimate {
  PenaltyModel model;
  std::vector<PenaltyIteration> iterations;
};

class PenaltyEstimationError : public Error {
 public:
  PenaltyEstimationError(const std::string& what, double last_a)
      : Error(ErrorCode::kEstimationFailure, what), last_a_(last_a) {}
  double last_a() const { return last_a_; }

 private:
  double last_a_;
};

inline constexpr int kMaxPenaltyIterations = 64;

/// Raises A from 0 until the cheapest infeasible portfolio costs at least the
/// midpoint of the feasible minimum and the feasible mean, all under F^(A).
/// The feasible mean weights each portfolio by its number of encodings
/// (2^zeros). Sums run over ternary vectors in lexicographic order (-1 < 0 <
/// +1, asset 0 most significant), which pins the result to the last bit, and
/// ties in the infeasible argmin go to the first vector in that order.
PenaltyModel estimate_penalty_coefficient(const PortfolioInstance& instance);
PenaltyEstimate estimate_penalty_coefficient_traced(const PortfolioInstance& instance);

/// Affine-normalized cost: 1 at the feasible minimum, 0 at the feasible
/// maximum, 0 when infeasible; 1 for any feasible z when the feasible set is
/// degenerate.
double approximation_ratio(const PortfolioInstance& instance, const FeasibleSetSummary& summary,
                           const TernaryPortfolio& z);

struct DistributionMetrics {
  double r_bar = 0.0;
  double p_opt = 0.0;
};

/// Per-basis-state classical data over all 4^N encodings, precomputed once
/// per (instance, penalty).
struct EncodedLandscape {
  int n_assets = 0;
  std::vector<double> cost;            // F(decode(x))
  std::vector<double> penalized_cost;  // F^(A)(decode(x))
  std::vector<double> ratio;           // approximation ratio of decode(x)
  std::vector<std::uint8_t> feasible;
  std::vector<std::uint8_t> optimal;   // decode(x) is in the argmin set

  static EncodedLandscape build(const PortfolioInstance& instance, const FeasibleSetSummary& summary,
                                const PenaltyModel& penalty);
};

/// Metrics of a distribution over the 4^N encoded basis states, indexed by
/// basis index. Throws kNormalization if the mass differs from 1 by > 1e-9.
DistributionMetrics distribution_metrics(const PortfolioInstance& instance, const FeasibleSetSummary& summary,
                                         std::span<const double> dist);
DistributionMetrics distribution_metrics(const EncodedLandscape& landscape, std::span<const double> dist);

}  // namespace tqaoa
