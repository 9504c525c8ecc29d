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

#include "tqaoa/gates.hpp"

#include <cmath>

#include "tqaoa/error.hpp"

namespace tqaoa {
namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 9> kNames{{
    {GateKind::kX, "x"},
    {GateKind::kH, "h"},
    {GateKind::kRX, "rx"},
    {GateKind::kRY, "ry"},
    {GateKind::kRZ, "rz"},
    {GateKind::kU, "u"},
    {GateKind::kCNOT, "cx"},
    {GateKind::kCRY, "cry"},
    {GateKind::kCCRY, "ccry"},
}};

int expected_arity(GateKind kind) {
  switch (kind) {
    case GateKind::kCNOT:
    case GateKind::kCRY: return 2;
    case GateKind::kCCRY: return 3;
    default: return 1;
  }
}

Complex phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

Mat2 ry_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {Complex(c), Complex(-s), Complex(s), Complex(c)};
}

}  // namespace

std::string_view to_string(GateKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::kParameter, "unknown gate kind '" + std::string(name) + "'");
}

std::size_t Gate::angle_count() const {
  switch (kind) {
    case GateKind::kX:
    case GateKind::kH:
    case GateKind::kCNOT: return 0;
    case GateKind::kU: return 3;
    default: return 1;
  }
}

Mat2 Gate::target_matrix() const {
  const double t = angles[0];
  switch (kind) {
    case GateKind::kX:
    case GateKind::kCNOT: return {Complex(0), Complex(1), Complex(1), Complex(0)};
    case GateKind::kH: {
      const double r = 1.0 / std::sqrt(2.0);
      return {Complex(r), Complex(r), Complex(r), Complex(-r)};
    }
    case GateKind::kRX: {
      const double c = std::cos(t / 2), s = std::sin(t / 2);
      return {Complex(c), Complex(0, -s), Complex(0, -s), Complex(c)};
    }
    case GateKind::kRY:
    case GateKind::kCRY:
    case GateKind::kCCRY: return ry_matrix(t);
    case GateKind::kRZ: return {phase(-t / 2), Complex(0), Complex(0), phase(t / 2)};
    case GateKind::kU: {
      // RZ(phi) RY(theta) RZ(lambda)
      const double theta = angles[0], phi = angles[1], lambda = angles[2];
      const double c = std::cos(theta / 2), s = std::sin(theta / 2);
      return {c * phase(-(phi + lambda) / 2), -s * phase(-(phi - lambda) / 2), s * phase((phi - lambda) / 2),
              c * phase((phi + lambda) / 2)};
    }
  }
  return {};
}

void validate_gate(const Gate& g, int n_qubits) {
  if (g.arity != expected_arity(g.kind)) {
    throw Error(ErrorCode::kShape, std::string(to_string(g.kind)) + " gate has wrong number of qubits");
  }
  for (int i = 0; i < g.arity; ++i) {
    const int q = g.qubits[static_cast<std::size_t>(i)];
    if (q < 0 || q >= n_qubits) {
      throw Error(ErrorCode::kIndex, "qubit " + std::to_string(q) + " out of range for " +
                                         std::to_string(n_qubits) + "-qubit register");
    }
    for (int j = 0; j < i; ++j) {
      if (g.qubits[static_cast<std::size_t>(j)] == q) throw Error(ErrorCode::kIndex, "repeated qubit in gate");
    }
  }
  for (std::size_t i = 0; i < g.angle_count(); ++i) {
    if (!std::isfinite(g.angles[i])) throw Error(ErrorCode::kParameter, "non-finite gate angle");
  }
}

void GateSequence::append(const GateSequence& other) {
  if (other.n_qubits > n_qubits) throw Error(ErrorCode::kShape, "appended sequence uses a larger register");
  for (const auto& b : other.barriers) barriers.push_back({gates.size() + b.position, b.label});
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

void GateSequence::validate() const {
  for (const auto& g : gates) validate_gate(g, n_qubits);
}

nlohmann::json GateSequence::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& g : gates) {
    nlohmann::json targets = nlohmann::json::array();
    for (int i = 0; i < g.arity; ++i) targets.push_back(g.qubits[static_cast<std::size_t>(i)]);
    nlohmann::json angles = nlohmann::json::array();
    for (std::size_t i = 0; i < g.angle_count(); ++i) angles.push_back(g.angles[i]);
    out.push_back({{"kind", to_string(g.kind)}, {"targets", targets}, {"angles", angles}});
  }
  return out;
}

GateSequence GateSequence::from_json(const nlohmann::json& j, int n_qubits) {
  GateSequence seq(n_qubits);
  for (const auto& item : j) {
    Gate g;
    g.kind = gate_kind_from_string(item.at("kind").get<std::string>());
    const auto& targets = item.at("targets");
    g.arity = static_cast<int>(targets.size());
    if (g.arity < 1 || g.arity > 3) throw Error(ErrorCode::kShape, "gate must act on 1 to 3 qubits");
    for (int i = 0; i < g.arity; ++i) g.qubits[static_cast<std::size_t>(i)] = targets[static_cast<std::size_t>(i)].get<int>();
    const auto& angles = item.at("angles");
    if (angles.size() != g.angle_count()) throw Error(ErrorCode::kShape, "wrong number of gate angles");
    for (std::size_t i = 0; i < angles.size(); ++i) g.angles[i] = angles[i].get<double>();
    validate_gate(g, n_qubits);
    seq.add(g);
  }
  return seq;
}

}  // namespace tqaoa
