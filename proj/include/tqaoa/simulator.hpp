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

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tqaoa/gates.hpp"

namespace tqaoa {

inline constexpr int kMaxStateVectorQubits = 16;
inline constexpr int kMaxDensityQubits = 12;

/// In-place amplitude kernels over a flat buffer of 2^n entries, qubit k
/// being bit k of the index.
namespace kernel {
void apply_controlled(std::span<Complex> amps, std::uint64_t control_mask, int target, const Mat2& m);
void apply_pair(std::span<Complex> amps, int a, int b, const Mat4& m);
void apply_pair_diagonal(std::span<Complex> amps, int a, int b, const std::array<Complex, 4>& d);
}  // namespace kernel

/// Pure state on n qubits. Starts in |0...0>.
class StateVector {
 public:
  explicit StateVector(int n_qubits);
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

  void apply(const Gate& g);
  void apply_pair(int a, int b, const Mat4& m) { kernel::apply_pair(amps_, a, b, m); }

  double norm_squared() const;
  Complex inner(const StateVector& other) const;  // <this|other>

 private:
  int n_;
  std::vector<Complex> amps_;
};

/// Mixed state on n qubits, stored row-major: element (r, c) lives at
/// r * 2^n + c, which is a 2n-qubit buffer with column bits low.
class DensityMatrix {
 public:
  explicit DensityMatrix(int n_qubits);
  static DensityMatrix from_statevector(const StateVector& psi);
  static DensityMatrix from_matrix(int n_qubits, std::vector<Complex> row_major);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  Complex operator()(std::size_t r, std::size_t c) const { return data_[r * dim() + c]; }
  std::span<const Complex> data() const { return data_; }

  /// rho -> U rho U^dagger
  void apply(const Gate& g);
  void apply_controlled(std::uint64_t control_mask, int target, const Mat2& m);
  void apply_pair(int a, int b, const Mat4& m);

  /// Local depolarizing channel on one qubit:
  /// rho -> (1 - eta) rho + eta (I/2 (x) Tr_q rho).
  void depolarize(int qubit, double eta);

  Complex trace() const;
  std::vector<double> diagonal() const;

 private:
  int n_;
  std::vector<Complex> data_;
};

/// Single-qubit depolarizing strength applied to every qubit a gate touches,
/// immediately after that gate.
struct NoiseModel {
  double eta = 0.0;
  void validate() const;
};

/// Applies a depolarizing channel to one qubit; a free-function wrapper for
/// symmetry with the gate API.
void depolarize(DensityMatrix& rho, int qubit, double eta);

/// Noiseless sequence precompiled into maximal runs of gates acting on at
/// most two qubits, each collapsed into one 4x4 (or diagonal) operation.
class FusedSequence {
 public:
  static FusedSequence compile(const GateSequence& seq);

  void apply(StateVector& psi) const;
  void apply(DensityMatrix& rho) const;

  int n_qubits() const { return n_qubits_; }
  std::size_t op_count() const { return ops_.size(); }

 private:
  struct Op {
    enum class Kind { kSingle, kPair, kPairDiagonal, kControlled } kind;
    int a = 0;
    int b = 0;
    std::uint64_t control_mask = 0;
    Mat4 m{};
  };
  int n_qubits_ = 0;
  std::vector<Op> ops_;
};

StateVector run_sequence(StateVector initial, const GateSequence& seq,
                         const std::optional<NoiseModel>& noise = std::nullopt);
DensityMatrix run_sequence(DensityMatrix initial, const GateSequence& seq,
                           const std::optional<NoiseModel>& noise = std::nullopt);

/// Probability of each basis index.
std::vector<double> measurement_distribution(const StateVector& psi);
std::vector<double> measurement_distribution(const DensityMatrix& rho);

/// Multinomial sample of `shots` outcomes; deterministic per seed. Keys are
/// basis indices.
std::map<std::uint64_t, std::uint64_t> sample_shots(std::span<const double> dist, std::uint64_t shots,
                                                    std::uint64_t seed);
/// Normalized empirical frequencies as a dense distribution over `dim` states.
std::vector<double> counts_to_distribution(const std::map<std::uint64_t, std::uint64_t>& counts, std::size_t dim);

/// sum_x p(x) values(x)
double expectation_diagonal(const StateVector& psi, std::span<const double> values);
double expectation_diagonal(const DensityMatrix& rho, std::span<const double> values);
double expectation_diagonal(std::span<const double> dist, std::span<const double> values);

}  // namespace tqaoa
