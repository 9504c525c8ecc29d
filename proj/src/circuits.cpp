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

#include "tqaoa/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tqaoa/error.hpp"

namespace tqaoa {
namespace {

constexpr double kPi = std::numbers::pi;

int string_qubit(int asset, bool long_string) { return long_string ? long_qubit(asset) : short_qubit(asset); }

// exp(-i theta Z_a Z_b)
void add_zz(GateSequence& seq, int a, int b, double theta) {
  seq.add(Gate::cnot(a, b));
  seq.add(Gate::rz(b, 2.0 * theta));
  seq.add(Gate::cnot(a, b));
}

void add_qampa_block(GateSequence& seq, int i, int j, double beta, double gamma_w) {
  // exp(i (a XX + b YY + c ZZ)) with a = b = beta, c = -gamma_w.
  const double a = beta, b = beta, c = -gamma_w;
  auto rz = [](int q, double phi) { return Gate::u(q, 0.0, phi, 0.0); };
  auto ry = [](int q, double theta) { return Gate::u(q, theta, 0.0, 0.0); };
  seq.add(rz(j, -kPi / 2));
  seq.add(Gate::cnot(j, i));
  seq.add(rz(i, kPi / 2 - 2.0 * c));
  seq.add(ry(j, 2.0 * a - kPi / 2));
  seq.add(Gate::cnot(i, j));
  seq.add(ry(j, kPi / 2 - 2.0 * b));
  seq.add(Gate::cnot(j, i));
  seq.add(rz(i, kPi / 2));
}

void add_xy_block(GateSequence& seq, int i, int j, double beta) {
  seq.add(Gate::rx(i, -kPi / 2));
  seq.add(Gate::rx(j, kPi / 2));
  seq.add(Gate::cnot(i, j));
  seq.add(Gate::rx(i, -2.0 * beta));
  seq.add(Gate::rz(j, 2.0 * beta));
  seq.add(Gate::cnot(i, j));
  seq.add(Gate::rx(i, kPi / 2));
  seq.add(Gate::rx(j, -kPi / 2));
}

// Circle-method round robin: every round is a perfect matching.
std::vector<std::pair<int, int>> round_robin_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  const int m = n % 2 == 0 ? n : n + 1;
  for (int r = 0; r < m - 1; ++r) {
    auto push = [&](int a, int b) {
      if (a >= n || b >= n) return;
      out.emplace_back(std::min(a, b), std::max(a, b));
    };
    push(r, m - 1);
    for (int k = 1; k < m / 2; ++k) push((r + k) % (m - 1), (r - k + m - 1) % (m - 1));
  }
  return out;
}

}  // namespace

std::string_view to_string(MixerKind kind) {
  switch (kind) {
    case MixerKind::kStandard: return "standard";
    case MixerKind::kXYRing: return "xy-ring";
    case MixerKind::kXYParityRing: return "xy-parity-ring";
    case MixerKind::kXYFull: return "xy-full";
    case MixerKind::kQAMPA: return "qampa";
  }
  return "unknown";
}

MixerKind mixer_from_string(std::string_view name) {
  for (MixerKind k : kAllMixers) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::kConfiguration, "unknown mixer '" + std::string(name) + "'");
}

double cost_scale(MixerKind mixer, int n_assets) {
  return mixer == MixerKind::kStandard ? 4.0 * n_assets : 2.0 * n_assets * (2.0 * n_assets - 1.0);
}

CostCoefficients build_cost_coefficients(const PortfolioInstance& instance, const PenaltyModel& penalty,
                                         MixerKind mixer) {
  instance.validate();
  if (preserves_budget(mixer) && penalty.coefficient_a != 0.0) {
    throw Error(ErrorCode::kConfiguration, "penalty must be zero for budget-preserving mixers");
  }
  const int n = instance.n_assets;
  const double a = penalty.coefficient_a;
  const double q = instance.q;
  CostCoefficients c;
  c.lambda = cost_scale(mixer, n);
  c.w_upper = Eigen::MatrixXd::Zero(n, n);
  c.w_linear = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) c.w_upper(i, j) = 0.5 * c.lambda * (q * instance.sigma(i, j) + a);
    c.w_linear(i) = 0.5 * c.lambda * ((1.0 - q) * instance.mu(i) + 2.0 * a * penalty.budget);
  }
  return c;
}

GateSequence build_cost_unitary(const CostCoefficients& coeffs, double gamma) {
  const int n = coeffs.n_assets();
  GateSequence seq(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = coeffs.w_upper(i, j);
      add_zz(seq, short_qubit(i), short_qubit(j), gamma * w);
      add_zz(seq, short_qubit(i), long_qubit(j), -gamma * w);
      add_zz(seq, long_qubit(i), short_qubit(j), -gamma * w);
      add_zz(seq, long_qubit(i), long_qubit(j), gamma * w);
    }
  }
  for (int i = 0; i < n; ++i) add_zz(seq, short_qubit(i), long_qubit(i), -gamma * coeffs.w_upper(i, i));
  for (int i = 0; i < n; ++i) {
    seq.add(Gate::rz(long_qubit(i), 2.0 * gamma * coeffs.w_linear(i)));
    seq.add(Gate::rz(short_qubit(i), -2.0 * gamma * coeffs.w_linear(i)));
  }
  return seq;
}

GateSequence build_standard_mixer(int n_qubits, double beta) {
  GateSequence seq(n_qubits);
  for (int k = 0; k < n_qubits; ++k) seq.add(Gate::rx(k, -2.0 * beta));
  return seq;
}

GateSequence build_xy_pair_block(int n_qubits, int i, int j, double beta) {
  GateSequence seq(n_qubits);
  add_xy_block(seq, i, j, beta);
  seq.validate();
  return seq;
}

std::vector<std::pair<int, int>> mixer_pairs(MixerKind kind, int n_assets) {
  if (n_assets < 2) return {};
  std::vector<std::pair<int, int>> pairs;
  switch (kind) {
    case MixerKind::kXYRing:
      for (int k = 0; k < n_assets; ++k) pairs.emplace_back(k, (k + 1) % n_assets);
      if (n_assets == 2) pairs.resize(1);  // (0,1) and (1,0) are the same edge
      break;
    case MixerKind::kXYParityRing:
      for (int parity = 0; parity < 2; ++parity) {
        for (int k = parity; k < n_assets; k += 2) pairs.emplace_back(k, (k + 1) % n_assets);
      }
      if (n_assets == 2) pairs.resize(1);
      break;
    case MixerKind::kXYFull:
    case MixerKind::kQAMPA: pairs = round_robin_pairs(n_assets); break;
    case MixerKind::kStandard: throw Error(ErrorCode::kConfiguration, "standard mixer has no pair set");
  }
  return pairs;
}

GateSequence build_xy_mixer(MixerKind kind, int n_assets, double beta) {
  if (!is_xy_family(kind)) throw Error(ErrorCode::kConfiguration, "not an XY mixer: " + std::string(to_string(kind)));
  GateSequence seq(2 * n_assets);
  const auto pairs = mixer_pairs(kind, n_assets);
  for (bool long_string : {false, true}) {
    for (const auto& [a, b] : pairs) add_xy_block(seq, string_qubit(a, long_string), string_qubit(b, long_string), beta);
  }
  return seq;
}

GateSequence build_qampa_block(int n_qubits, int i, int j, double beta, double gamma_w) {
  GateSequence seq(n_qubits);
  add_qampa_block(seq, i, j, beta, gamma_w);
  seq.validate();
  return seq;
}

GateSequence build_qampa_layer(const CostCoefficients& coeffs, double beta, double gamma) {
  const int n = coeffs.n_assets();
  GateSequence seq(2 * n);
  for (int i = 0; i < n; ++i) {
    seq.add(Gate::rz(long_qubit(i), 2.0 * gamma * coeffs.w_linear(i)));
    seq.add(Gate::rz(short_qubit(i), -2.0 * gamma * coeffs.w_linear(i)));
  }
  for (int i = 0; i < n; ++i) add_zz(seq, short_qubit(i), long_qubit(i), -gamma * coeffs.w_upper(i, i));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      add_zz(seq, short_qubit(i), long_qubit(j), -gamma * coeffs.w_upper(i, j));
      add_zz(seq, long_qubit(i), short_qubit(j), -gamma * coeffs.w_upper(i, j));
    }
  }
  const auto pairs = mixer_pairs(MixerKind::kQAMPA, n);
  for (bool long_string : {false, true}) {
    for (const auto& [a, b] : pairs) {
      add_qampa_block(seq, string_qubit(a, long_string), string_qubit(b, long_string), beta,
                      gamma * coeffs.w_upper(a, b));
    }
  }
  return seq;
}

GateSequence build_uniform_initial(int n_qubits) {
  GateSequence seq(n_qubits);
  for (int k = 0; k < n_qubits; ++k) seq.add(Gate::h(k));
  return seq;
}

GateSequence build_dicke_initial(int n_assets, int budget) {
  if (n_assets < 1) throw Error(ErrorCode::kParameter, "need at least one asset");
  if (std::abs(budget) > n_assets) throw Error(ErrorCode::kParameter, "budget exceeds asset count");
  const int n = 2 * n_assets;
  const int k = n_assets + budget;
  GateSequence seq(n);
  for (int q = n - k; q < n; ++q) seq.add(Gate::x(q));
  if (k > 0 && k < n) {
    for (int m = n; m >= 2; --m) {
      const int kk = std::min(m - 1, k);
      // SCS_{m,kk} on qubits 0..m-1.
      seq.add(Gate::cnot(m - 2, m - 1));
      seq.add(Gate::cry(m - 1, m - 2, 2.0 * std::acos(std::sqrt(1.0 / m))));
      seq.add(Gate::cnot(m - 2, m - 1));
      for (int l = 2; l <= kk; ++l) {
        seq.add(Gate::cnot(m - l - 1, m - 1));
        seq.add(Gate::ccry(m - 1, m - l, m - l - 1, 2.0 * std::acos(std::sqrt(static_cast<double>(l) / m))));
        seq.add(Gate::cnot(m - l - 1, m - 1));
      }
    }
  }
  for (int i = 0; i < n_assets; ++i) seq.add(Gate::x(short_qubit(i)));
  return seq;
}

StateVector analytic_feasible_superposition(int n_assets, int budget) {
  if (std::abs(budget) > n_assets) throw Error(ErrorCode::kParameter, "budget exceeds asset count");
  StateVector psi(2 * n_assets);
  const double amp = 1.0 / std::sqrt(static_cast<double>(feasible_encoding_count(n_assets, budget)));
  auto amps = psi.amplitudes();
  for (std::uint64_t x = 0; x < psi.dim(); ++x) {
    int sum = 0;
    for (int i = 0; i < n_assets; ++i) sum += static_cast<int>((x >> long_qubit(i)) & 1U) - static_cast<int>((x >> short_qubit(i)) & 1U);
    amps[x] = sum == budget ? Complex(amp) : Complex(0);
  }
  return psi;
}

CircuitStats circuit_stats(const GateSequence& seq) {
  CircuitStats s;
  s.total_gates = seq.size();
  std::vector<std::size_t> level(static_cast<std::size_t>(std::max(seq.n_qubits, 0)), 0);
  for (const Gate& g : seq.gates) {
    if (g.kind == GateKind::kCNOT) ++s.cnot_count;
    std::size_t top = 0;
    for (int i = 0; i < g.arity; ++i) top = std::max(top, level[static_cast<std::size_t>(g.qubits[static_cast<std::size_t>(i)])]);
    for (int i = 0; i < g.arity; ++i) level[static_cast<std::size_t>(g.qubits[static_cast<std::size_t>(i)])] = top + 1;
    s.depth = std::max(s.depth, top + 1);
  }
  return s;
}

std::string circuit_stats_csv_header() { return "mixer,n_assets,budget,p,total_gates,cnot_count,depth"; }

std::string circuit_stats_csv_row(std::string_view mixer, int n_assets, int budget, int p, const CircuitStats& stats) {
  std::ostringstream os;
  os << mixer << ',' << n_assets << ',' << budget << ',' << p << ',' << stats.total_gates << ',' << stats.cnot_count
     << ',' << stats.depth;
  return os.str();
}

}  // namespace tqaoa
