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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles/dense_oracle.hpp"
#include "tqaoa/error.hpp"
#include "tqaoa/random.hpp"
#include "tqaoa/simulator.hpp"

namespace tqaoa {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

GateSequence random_sequence(int n, int length, std::uint64_t seed) {
  Rng rng(seed);
  GateSequence seq(n);
  auto pick = [&](int k) { return static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(k)); };
  for (int t = 0; t < length; ++t) {
    int a = pick(n), b = pick(n - 1), c = pick(n - 2);
    if (b >= a) ++b;
    int lo = std::min(a, b), hi = std::max(a, b);
    if (c >= lo) ++c;
    if (c >= hi) ++c;
    const double th = rng.uniform(-3.0, 3.0);
    switch (pick(9)) {
      case 0: seq.add(Gate::x(a)); break;
      case 1: seq.add(Gate::h(a)); break;
      case 2: seq.add(Gate::rx(a, th)); break;
      case 3: seq.add(Gate::ry(a, th)); break;
      case 4: seq.add(Gate::rz(a, th)); break;
      case 5: seq.add(Gate::u(a, th, rng.uniform(-3, 3), rng.uniform(-3, 3))); break;
      case 6: seq.add(Gate::cnot(a, b)); break;
      case 7: seq.add(Gate::cry(a, b, th)); break;
      default: seq.add(Gate::ccry(a, b, c, th)); break;
    }
  }
  return seq;
}

VectorXcd to_eigen(const StateVector& psi) {
  VectorXcd v(static_cast<Eigen::Index>(psi.dim()));
  for (std::size_t i = 0; i < psi.dim(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
  return v;
}

MatrixXcd to_eigen(const DensityMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rho(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  return m;
}

// Pauli-twirl form of the single-qubit depolarizing channel.
MatrixXcd depolarize_oracle(const MatrixXcd& rho, int n, int q, double eta) {
  MatrixXcd out = (1.0 - 0.75 * eta) * rho;
  for (char p : {'X', 'Y', 'Z'}) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(q)] = p;
    const MatrixXcd P = oracle::pauli_string(s);
    out += 0.25 * eta * P * rho * P;
  }
  return out;
}

TEST(StateVector, MatchesDenseProductOnRandomCircuits) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 3 + static_cast<int>(seed % 3);
    const auto seq = random_sequence(n, 40, seed);
    const auto psi = run_sequence(StateVector(n), seq);
    const VectorXcd expect = oracle::sequence_unitary(seq).col(0);
    EXPECT_LT((to_eigen(psi) - expect).cwiseAbs().maxCoeff(), 1e-10) << seed;
    EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-12);
  }
}

TEST(StateVector, FusedAgreesWithGateByGate) {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const auto seq = random_sequence(6, 80, seed);
    StateVector a(6), b(6);
    for (const auto& g : seq.gates) a.apply(g);
    const auto fused = FusedSequence::compile(seq);
    EXPECT_LT(fused.op_count(), seq.size());
    fused.apply(b);
    EXPECT_LT((to_eigen(a) - to_eigen(b)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(StateVector, FromAmplitudesValidatesSize) {
  try {
    StateVector::from_amplitudes(std::vector<Complex>(6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShape);
  }
}

TEST(StateVector, CapacityLimit) {
  EXPECT_NO_THROW(StateVector{kMaxStateVectorQubits});
  try {
    StateVector psi(kMaxStateVectorQubits + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapacity);
  }
}

TEST(StateVector, RejectsNoise) {
  GateSequence seq(2);
  seq.add(Gate::h(0));
  try {
    run_sequence(StateVector(2), seq, NoiseModel{0.01});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendMismatch);
  }
}

TEST(StateVector, BadQubitIndex) {
  StateVector psi(2);
  try {
    psi.apply(Gate::cnot(0, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndex);
  }
}

TEST(DensityMatrix, NoiselessEqualsOuterProduct) {
  for (std::uint64_t seed = 40; seed < 46; ++seed) {
    const auto seq = random_sequence(4, 40, seed);
    const VectorXcd v = to_eigen(run_sequence(StateVector(4), seq));
    const MatrixXcd expect = v * v.adjoint();
    const auto rho = run_sequence(DensityMatrix(4), seq);
    EXPECT_LT((to_eigen(rho) - expect).cwiseAbs().maxCoeff(), 1e-12);
    DensityMatrix fused(4);
    FusedSequence::compile(seq).apply(fused);
    EXPECT_LT((to_eigen(fused) - expect).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DensityMatrix, FromStatevector) {
  const auto psi = run_sequence(StateVector(3), random_sequence(3, 20, 7));
  const VectorXcd v = to_eigen(psi);
  EXPECT_LT((to_eigen(DensityMatrix::from_statevector(psi)) - v * v.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(DensityMatrix, CapacityLimit) {
  try {
    DensityMatrix rho(kMaxDensityQubits + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapacity);
  }
}

TEST(Depolarize, MatchesPauliTwirl) {
  const auto psi = run_sequence(StateVector(3), random_sequence(3, 30, 3));
  const MatrixXcd rho0 = to_eigen(DensityMatrix::from_statevector(psi));
  for (int q = 0; q < 3; ++q) {
    for (double eta : {0.0, 0.01, 0.3, 1.0}) {
      auto rho = DensityMatrix::from_statevector(psi);
      depolarize(rho, q, eta);
      EXPECT_LT((to_eigen(rho) - depolarize_oracle(rho0, 3, q, eta)).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(Depolarize, FullStrengthOnEveryQubitIsMaximallyMixed) {
  auto rho = DensityMatrix::from_statevector(run_sequence(StateVector(3), random_sequence(3, 30, 5)));
  for (int q = 0; q < 3; ++q) rho.depolarize(q, 1.0);
  EXPECT_LT((to_eigen(rho) - MatrixXcd::Identity(8, 8) / 8.0).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Depolarize, InvalidStrength) {
  DensityMatrix rho(1);
  for (double eta : {-0.1, 1.5, std::nan("")}) {
    try {
      rho.depolarize(0, eta);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParameter);
    }
  }
}

TEST(Noise, EveryTouchedQubitIsDepolarizedAfterEachGate) {
  const int n = 3;
  const double eta = 0.07;
  const auto seq = random_sequence(n, 25, 11);
  MatrixXcd expect = MatrixXcd::Zero(8, 8);
  expect(0, 0) = 1.0;
  for (const auto& g : seq.gates) {
    const MatrixXcd u = oracle::gate_matrix(g, n);
    expect = u * expect * u.adjoint();
    for (int k = 0; k < g.arity; ++k) expect = depolarize_oracle(expect, n, g.qubits[static_cast<std::size_t>(k)], eta);
  }
  const auto rho = run_sequence(DensityMatrix(n), seq, NoiseModel{eta});
  EXPECT_LT((to_eigen(rho) - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Noise, StateStaysPhysical) {
  const auto rho = run_sequence(DensityMatrix(4), random_sequence(4, 60, 13), NoiseModel{0.05});
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  EXPECT_NEAR(rho.trace().imag(), 0.0, 1e-12);
  const MatrixXcd m = to_eigen(rho);
  EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
  // purity strictly drops below one under noise
  EXPECT_LT((m * m).trace().real(), 1.0 - 1e-3);
}

TEST(Noise, ZeroStrengthMatchesNoiseless) {
  const auto seq = random_sequence(3, 30, 17);
  const auto a = run_sequence(DensityMatrix(3), seq, NoiseModel{0.0});
  const auto b = run_sequence(DensityMatrix(3), seq);
  EXPECT_LT((to_eigen(a) - to_eigen(b)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Distribution, SumsToOneAndMatchesDiagonal) {
  const auto seq = random_sequence(4, 30, 19);
  const auto psi = run_sequence(StateVector(4), seq);
  const auto p = measurement_distribution(psi);
  const auto q = measurement_distribution(run_sequence(DensityMatrix(4), seq));
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    total += p[i];
    EXPECT_NEAR(p[i], std::norm(psi[i]), 1e-15);
    EXPECT_NEAR(p[i], q[i], 1e-12);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Sampling, DeterministicAndWithinFiveSigma) {
  const auto p = measurement_distribution(run_sequence(StateVector(3), random_sequence(3, 30, 23)));
  const std::uint64_t shots = 20000;
  const auto c1 = sample_shots(p, shots, 99);
  EXPECT_EQ(c1, sample_shots(p, shots, 99));
  EXPECT_NE(c1, sample_shots(p, shots, 100));
  std::uint64_t total = 0;
  for (const auto& [k, c] : c1) {
    total += c;
    EXPECT_GT(p[k], 0.0);
  }
  EXPECT_EQ(total, shots);
  const auto freq = counts_to_distribution(c1, p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double sigma = std::sqrt(p[i] * (1 - p[i]) / static_cast<double>(shots));
    EXPECT_LE(std::abs(freq[i] - p[i]), 5 * sigma + 1e-12) << i;
  }
}

TEST(Sampling, RejectsBadDistribution) {
  const std::vector<double> zero(4, 0.0), negative{0.5, 0.6, -0.1, 0.0};
  for (const auto& d : {zero, negative}) {
    try {
      sample_shots(d, 10, 1);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNormalization);
    }
  }
}

TEST(Expectation, AllOverloadsAgree) {
  const auto seq = random_sequence(3, 30, 29);
  const auto psi = run_sequence(StateVector(3), seq);
  const auto rho = run_sequence(DensityMatrix(3), seq);
  std::vector<double> values(8);
  for (std::size_t i = 0; i < 8; ++i) values[i] = std::sin(static_cast<double>(i) + 0.3);
  const double a = expectation_diagonal(psi, values);
  EXPECT_NEAR(a, expectation_diagonal(rho, values), 1e-12);
  EXPECT_NEAR(a, expectation_diagonal(measurement_distribution(psi), values), 1e-15);
  try {
    expectation_diagonal(psi, std::vector<double>(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShape);
  }
}

}  // namespace
}  // namespace tqaoa
