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

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tqaoa {

using Complex = std::complex<double>;
/// Row-major 2x2 matrix.
using Mat2 = std::array<Complex, 4>;
/// Row-major 4x4 matrix on a qubit pair (a, b); local index = bit_a | bit_b << 1.
using Mat4 = std::array<Complex, 16>;

enum class GateKind { kX, kH, kRX, kRY, kRZ, kU, kCNOT, kCRY, kCCRY };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

/// Single-target gate with up to two controls. `qubits` lists controls first
/// and the target last. Angles are in radians; RX/RY/RZ/CRY/CCRY use
/// angles[0], U uses (theta, phi, lambda) with U = RZ(phi) RY(theta) RZ(lambda).
struct Gate {
  GateKind kind = GateKind::kX;
  std::array<int, 3> qubits{};
  int arity = 1;
  std::array<double, 3> angles{};

  static Gate x(int q) { return {GateKind::kX, {q, 0, 0}, 1, {}}; }
  static Gate h(int q) { return {GateKind::kH, {q, 0, 0}, 1, {}}; }
  static Gate rx(int q, double theta) { return {GateKind::kRX, {q, 0, 0}, 1, {theta, 0, 0}}; }
  static Gate ry(int q, double theta) { return {GateKind::kRY, {q, 0, 0}, 1, {theta, 0, 0}}; }
  static Gate rz(int q, double theta) { return {GateKind::kRZ, {q, 0, 0}, 1, {theta, 0, 0}}; }
  static Gate u(int q, double theta, double phi, double lambda) {
    return {GateKind::kU, {q, 0, 0}, 1, {theta, phi, lambda}};
  }
  static Gate cnot(int control, int target) { return {GateKind::kCNOT, {control, target, 0}, 2, {}}; }
  static Gate cry(int control, int target, double theta) {
    return {GateKind::kCRY, {control, target, 0}, 2, {theta, 0, 0}};
  }
  static Gate ccry(int c1, int c2, int target, double theta) {
    return {GateKind::kCCRY, {c1, c2, target}, 3, {theta, 0, 0}};
  }

  int target() const { return qubits[static_cast<std::size_t>(arity - 1)]; }
  int control_count() const { return arity - 1; }
  std::size_t angle_count() const;

  /// 2x2 unitary applied to the target when all controls are set.
  Mat2 target_matrix() const;

  bool operator==(const Gate&) const = default;
};

/// Ordered gates over a fixed register. Barriers only label positions for
/// reporting; they have no effect on simulation or depth.
struct GateSequence {
  struct Barrier {
    std::size_t position = 0;
    std::string label;
  };

  int n_qubits = 0;
  std::vector<Gate> gates;
  std::vector<Barrier> barriers;

  GateSequence() = default;
  explicit GateSequence(int n) : n_qubits(n) {}

  void add(const Gate& g) { gates.push_back(g); }
  void barrier(std::string label) { barriers.push_back({gates.size(), std::move(label)}); }
  /// Appends another sequence on the same register, keeping its barriers.
  void append(const GateSequence& other);

  std::size_t size() const { return gates.size(); }
  bool empty() const { return gates.empty(); }

  /// Throws kIndex for out-of-range or repeated qubits.
  void validate() const;

  /// JSON array of {kind, targets, angles}.
  nlohmann::json to_json() const;
  static GateSequence from_json(const nlohmann::json& j, int n_qubits);
};

void validate_gate(const Gate& g, int n_qubits);

}  // namespace tqaoa
