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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tqaoa/finance.hpp"
#include "tqaoa/gates.hpp"
#include "tqaoa/problem.hpp"
#include "tqaoa/simulator.hpp"

namespace tqaoa {

enum class MixerKind { kStandard, kXYRing, kXYParityRing, kXYFull, kQAMPA };

inline constexpr MixerKind kAllMixers[] = {MixerKind::kStandard, MixerKind::kXYRing, MixerKind::kXYParityRing,
                                           MixerKind::kXYFull, MixerKind::kQAMPA};

/// "standard", "xy-ring", "xy-parity-ring", "xy-full", "qampa".
std::string_view to_string(MixerKind kind);
MixerKind mixer_from_string(std::string_view name);

inline bool is_xy_family(MixerKind k) {
  return k == MixerKind::kXYRing || k == MixerKind::kXYParityRing || k == MixerKind::kXYFull;
}
/// Every mixer except Standard keeps the budget exactly and starts from the
/// Dicke state.
inline bool preserves_budget(MixerKind k) { return k != MixerKind::kStandard; }

/// Coefficients of lambda * F^(A) written in Pauli-Z form:
///   sum_{i<j} W_ij (Z-Z- - Z-Z+ - Z+Z- + Z+Z+) + sum_i W_ii (1 - Z_i^- Z_i^+)
///   + sum_i w_i (Z+ - Z-) + const.
/// `w_upper` holds W_ij for i<j in its strict upper triangle and W_ii on the
/// diagonal; the strict lower triangle is zero.
struct CostCoefficients {
  Eigen::MatrixXd w_upper;
  Eigen::VectorXd w_linear;
  double lambda = 1.0;
  int n_assets() const { return static_cast<int>(w_linear.size()); }
};

double cost_scale(MixerKind mixer, int n_assets);

/// Throws kConfiguration if A != 0 with a budget-preserving mixer.
CostCoefficients build_cost_coefficients(const PortfolioInstance& instance, const PenaltyModel& penalty,
                                         MixerKind mixer);

/// exp(-i gamma lambda F^(A)) as CNOT / RZ blocks. Diagonal.
GateSequence build_cost_unitary(const CostCoefficients& coeffs, double gamma);

/// exp(i beta sum_k X_k) as RX(-2 beta) on every qubit.
GateSequence build_standard_mixer(int n_qubits, double beta);

/// exp(i beta (X_i X_j + Y_i Y_j)) on a register of n_qubits.
GateSequence build_xy_pair_block(int n_qubits, int i, int j, double beta);

/// Asset pairs per string, in application order. Each pair is (a, b), a < b
/// except for the wrap-around ring edge.
std::vector<std::pair<int, int>> mixer_pairs(MixerKind kind, int n_assets);

/// Pair blocks on the short string then the long string.
GateSequence build_xy_mixer(MixerKind kind, int n_assets, double beta);

/// exp(i beta (XX + YY) - i gamma_w ZZ) on (i, j) as a 3-CNOT circuit.
GateSequence build_qampa_block(int n_qubits, int i, int j, double beta, double gamma_w);

/// One combined mixer/phase layer: every diagonal factor that does not pair
/// two qubits of the same string (linear, intra-asset and cross-string ZZ),
/// then the fused blocks over all intra-string pairs.
GateSequence build_qampa_layer(const CostCoefficients& coeffs, double beta, double gamma);

GateSequence build_uniform_initial(int n_qubits);

/// Split-and-cyclic-shift preparation of the equal superposition over all
/// budget-B encodings. Throws kParameter if |budget| > n_assets.
GateSequence build_dicke_initial(int n_assets, int budget);

/// Amplitude 1/sqrt(K) on every encoding that decodes to sum(z) = budget.
StateVector analytic_feasible_superposition(int n_assets, int budget);

struct CircuitStats {
  std::size_t total_gates = 0;
  std::size_t cnot_count = 0;  // literal CNOT gates; CRY/CCRY are not expanded
  std::size_t depth = 0;
};

/// Depth by ASAP layering: each gate sits one layer above the latest gate
/// sharing a qubit with it.
CircuitStats circuit_stats(const GateSequence& seq);

std::string circuit_stats_csv_header();
std::string circuit_stats_csv_row(std::string_view mixer, int n_assets, int budget, int p, const CircuitStats& stats);

}  // namespace tqaoa
