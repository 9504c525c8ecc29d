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

#include "tqaoa/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "tqaoa/error.hpp"
#include "tqaoa/random.hpp"

namespace tqaoa {
namespace kernel {
namespace {

// Spreads the bits of k around two zero bits at positions lo < hi.
inline std::uint64_t insert_two_zeros(std::uint64_t k, int lo, int hi) {
  k = ((k >> lo) << (lo + 1)) | (k & ((std::uint64_t{1} << lo) - 1));
  k = ((k >> hi) << (hi + 1)) | (k & ((std::uint64_t{1} << hi) - 1));
  return k;
}

}  // namespace

void apply_controlled(std::span<Complex> amps, std::uint64_t control_mask, int target, const Mat2& m) {
  const std::uint64_t tb = std::uint64_t{1} << target;
  const std::uint64_t dim = amps.size();
  const bool diagonal = m[1] == Complex(0) && m[2] == Complex(0);
  const bool swap = m[0] == Complex(0) && m[3] == Complex(0) && m[1] == Complex(1) && m[2] == Complex(1);
  for (std::uint64_t base = 0; base < dim; base += 2 * tb) {
    for (std::uint64_t i = base; i < base + tb; ++i) {
      if ((i & control_mask) != control_mask) continue;
      Complex& a0 = amps[i];
      Complex& a1 = amps[i | tb];
      if (swap) {
        std::swap(a0, a1);
      } else if (diagonal) {
        a0 *= m[0];
        a1 *= m[3];
      } else {
        const Complex v0 = a0, v1 = a1;
        a0 = m[0] * v0 + m[1] * v1;
        a1 = m[2] * v0 + m[3] * v1;
      }
    }
  }
}

void apply_pair(std::span<Complex> amps, int a, int b, const Mat4& m) {
  const std::uint64_t ab = std::uint64_t{1} << a;
  const std::uint64_t bb = std::uint64_t{1} << b;
  const int lo = std::min(a, b), hi = std::max(a, b);
  const std::uint64_t quarter = amps.size() / 4;
  for (std::uint64_t k = 0; k < quarter; ++k) {
    const std::uint64_t i = insert_two_zeros(k, lo, hi);
    const std::uint64_t idx[4] = {i, i | ab, i | bb, i | ab | bb};
    const Complex v[4] = {amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      const Complex* row = &m[static_cast<std::size_t>(4 * r)];
      amps[idx[r]] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
    }
  }
}

void apply_pair_diagonal(std::span<Complex> amps, int a, int b, const std::array<Complex, 4>& d) {
  const std::uint64_t dim = amps.size();
  for (std::uint64_t i = 0; i < dim; ++i) {
    const std::size_t l = ((i >> a) & 1U) | (((i >> b) & 1U) << 1);
    amps[i] *= d[l];
  }
}

}  // namespace kernel

namespace {

void check_capacity(int n, int limit, const char* backend) {
  if (n < 0 || n > limit) {
    throw Error(ErrorCode::kCapacity, std::string(backend) + " backend supports at most " + std::to_string(limit) +
                                          " qubits, got " + std::to_string(n));
  }
}

std::uint64_t control_mask_of(const Gate& g) {
  std::uint64_t mask = 0;
  for (int i = 0; i < g.control_count(); ++i) mask |= std::uint64_t{1} << g.qubits[static_cast<std::size_t>(i)];
  return mask;
}

Mat2 conj(const Mat2& m) { return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])}; }

Mat4 conj(const Mat4& m) {
  Mat4 out;
  for (std::size_t i = 0; i < 16; ++i) out[i] = std::conj(m[i]);
  return out;
}

Mat4 multiply(const Mat4& lhs, const Mat4& rhs) {
  Mat4 out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      Complex s = 0;
      for (int k = 0; k < 4; ++k) s += lhs[static_cast<std::size_t>(4 * r + k)] * rhs[static_cast<std::size_t>(4 * k + c)];
      out[static_cast<std::size_t>(4 * r + c)] = s;
    }
  }
  return out;
}

// 4x4 matrix of a gate (arity <= 2) acting inside the local pair (a, b).
Mat4 pair_matrix(const Gate& g, int a, int b) {
  auto local = [&](int q) { return q == a ? 0 : (q == b ? 1 : -1); };
  Gate lg = g;
  for (int i = 0; i < g.arity; ++i) {
    lg.qubits[static_cast<std::size_t>(i)] = local(g.qubits[static_cast<std::size_t>(i)]);
  }
  const Mat2 tm = lg.target_matrix();
  const std::uint64_t mask = control_mask_of(lg);
  Mat4 out{};
  for (std::size_t col = 0; col < 4; ++col) {
    std::array<Complex, 4> v{};
    v[col] = 1.0;
    kernel::apply_controlled(v, mask, lg.target(), tm);
    for (std::size_t row = 0; row < 4; ++row) out[4 * row + col] = v[row];
  }
  return out;
}

bool is_diagonal(const Mat4& m) {
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (r != c && m[4 * r + c] != Complex(0)) return false;
    }
  }
  return true;
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  check_capacity(n_qubits, kMaxStateVectorQubits, "statevector");
  amps_.assign(std::size_t{1} << n_qubits, Complex(0));
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim == 0 || (dim & (dim - 1)) != 0) throw Error(ErrorCode::kShape, "amplitude count must be a power of two");
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  StateVector psi(n);
  psi.amps_ = std::move(amplitudes);
  return psi;
}

void StateVector::apply(const Gate& g) {
  validate_gate(g, n_);
  kernel::apply_controlled(amps_, control_mask_of(g), g.target(), g.target_matrix());
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.dim() != dim()) throw Error(ErrorCode::kShape, "inner product of states with different sizes");
  Complex s = 0;
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

DensityMatrix::DensityMatrix(int n_qubits) : n_(n_qubits) {
  check_capacity(n_qubits, kMaxDensityQubits, "density-matrix");
  data_.assign(std::size_t{1} << (2 * n_qubits), Complex(0));
  data_[0] = 1.0;
}

DensityMatrix DensityMatrix::from_statevector(const StateVector& psi) {
  DensityMatrix rho(psi.n_qubits());
  const std::size_t d = psi.dim();
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) rho.data_[r * d + c] = psi[r] * std::conj(psi[c]);
  }
  return rho;
}

DensityMatrix DensityMatrix::from_matrix(int n_qubits, std::vector<Complex> row_major) {
  DensityMatrix rho(n_qubits);
  if (row_major.size() != rho.data_.size()) throw Error(ErrorCode::kShape, "density matrix has wrong size");
  rho.data_ = std::move(row_major);
  return rho;
}

void DensityMatrix::apply(const Gate& g) {
  validate_gate(g, n_);
  apply_controlled(control_mask_of(g), g.target(), g.target_matrix());
}

void DensityMatrix::apply_controlled(std::uint64_t control_mask, int target, const Mat2& m) {
  kernel::apply_controlled(data_, control_mask << n_, target + n_, m);
  kernel::apply_controlled(data_, control_mask, target, conj(m));
}

void DensityMatrix::apply_pair(int a, int b, const Mat4& m) {
  kernel::apply_pair(data_, a + n_, b + n_, m);
  kernel::apply_pair(data_, a, b, conj(m));
}

void DensityMatrix::depolarize(int qubit, double eta) {
  NoiseModel{eta}.validate();
  if (qubit < 0 || qubit >= n_) throw Error(ErrorCode::kIndex, "depolarized qubit out of range");
  if (eta == 0.0) return;
  const std::uint64_t col_bit = std::uint64_t{1} << qubit;
  const std::uint64_t row_bit = std::uint64_t{1} << (qubit + n_);
  const double keep = 1.0 - 0.5 * eta;
  const double move = 0.5 * eta;
  const double off = 1.0 - eta;
  const std::uint64_t quarter = data_.size() / 4;
  const int lo = qubit, hi = qubit + n_;
  for (std::uint64_t k = 0; k < quarter; ++k) {
    std::uint64_t i = ((k >> lo) << (lo + 1)) | (k & ((std::uint64_t{1} << lo) - 1));
    i = ((i >> hi) << (hi + 1)) | (i & ((std::uint64_t{1} << hi) - 1));
    Complex& r00 = data_[i];
    Complex& r11 = data_[i | col_bit | row_bit];
    const Complex d0 = r00, d1 = r11;
    r00 = keep * d0 + move * d1;
    r11 = keep * d1 + move * d0;
    data_[i | col_bit] *= off;
    data_[i | row_bit] *= off;
  }
}

Complex DensityMatrix::trace() const {
  Complex t = 0;
  for (std::size_t i = 0; i < dim(); ++i) t += data_[i * dim() + i];
  return t;
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> d(dim());
  for (std::size_t i = 0; i < dim(); ++i) d[i] = data_[i * dim() + i].real();
  return d;
}

void NoiseModel::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorCode::kParameter, "depolarizing strength must lie in [0, 1]");
}

void depolarize(DensityMatrix& rho, int qubit, double eta) { rho.depolarize(qubit, eta); }

FusedSequence FusedSequence::compile(const GateSequence& seq) {
  seq.validate();
  FusedSequence out;
  out.n_qubits_ = seq.n_qubits;

  // Open block: qubits (a, b) with b == -1 while only one qubit is involved.
  // A one-qubit block keeps its 2x2 matrix in the top-left of `m`.
  int a = -1, b = -1;
  Mat4 m{};
  auto flush = [&] {
    if (a < 0) return;
    Op op;
    if (b < 0) {
      op.kind = Op::Kind::kSingle;
      op.a = a;
      op.m = m;
    } else {
      op.kind = is_diagonal(m) ? Op::Kind::kPairDiagonal : Op::Kind::kPair;
      op.a = a;
      op.b = b;
      op.m = m;
    }
    out.ops_.push_back(op);
    a = b = -1;
  };
  auto single_as_mat4 = [](const Mat2& s) {
    Mat4 r{};
    r[0] = s[0];
    r[1] = s[1];
    r[4] = s[2];
    r[5] = s[3];
    return r;
  };
  auto expand_single = [](const Mat4& s) {
    // s (on local qubit 0) tensored with identity on local qubit 1.
    Mat4 r{};
    for (int hi = 0; hi < 2; ++hi) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r[static_cast<std::size_t>(4 * (2 * hi + i) + 2 * hi + j)] = s[static_cast<std::size_t>(4 * i + j)];
      }
    }
    return r;
  };

  for (const Gate& g : seq.gates) {
    if (g.arity == 3) {
      flush();
      Op op;
      op.kind = Op::Kind::kControlled;
      op.a = g.target();
      op.control_mask = control_mask_of(g);
      op.m = single_as_mat4(g.target_matrix());
      out.ops_.push_back(op);
      continue;
    }
    const int g0 = g.qubits[0];
    const int g1 = g.arity == 2 ? g.qubits[1] : -1;
    auto in_block = [&](int q) { return q == a || q == b; };
    if (a >= 0 && b < 0) {
      // Single-qubit block can absorb anything that touches its qubit or
      // needs at most one more.
      if (g.arity == 1 && g0 == a) {
        const Mat2 gm = g.target_matrix();
        const Mat4 gm4 = single_as_mat4(gm);
        Mat4 prod{};
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) {
            prod[static_cast<std::size_t>(4 * r + c)] = gm4[static_cast<std::size_t>(4 * r)] * m[static_cast<std::size_t>(c)] +
                                                        gm4[static_cast<std::size_t>(4 * r + 1)] * m[static_cast<std::size_t>(4 + c)];
          }
        }
        m = prod;
        continue;
      }
      if (g.arity == 2 && (g0 == a || g1 == a)) {
        b = g0 == a ? g1 : g0;
        m = multiply(pair_matrix(g, a, b), expand_single(m));
        continue;
      }
    } else if (a >= 0) {
      if (in_block(g0) && (g1 < 0 || in_block(g1))) {
        m = multiply(pair_matrix(g, a, b), m);
        continue;
      }
    }
    flush();
    if (g.arity == 1) {
      a = g0;
      m = single_as_mat4(g.target_matrix());
    } else {
      a = g0;
      b = g1;
      m = pair_matrix(g, a, b);
    }
  }
  flush();
  return out;
}

void FusedSequence::apply(StateVector& psi) const {
  if (psi.n_qubits() != n_qubits_) throw Error(ErrorCode::kShape, "fused sequence register size mismatch");
  auto amps = psi.amplitudes();
  for (const Op& op : ops_) {
    switch (op.kind) {
      case Op::Kind::kSingle:
        kernel::apply_controlled(amps, 0, op.a, {op.m[0], op.m[1], op.m[4], op.m[5]});
        break;
      case Op::Kind::kPair: kernel::apply_pair(amps, op.a, op.b, op.m); break;
      case Op::Kind::kPairDiagonal:
        kernel::apply_pair_diagonal(amps, op.a, op.b, {op.m[0], op.m[5], op.m[10], op.m[15]});
        break;
      case Op::Kind::kControlled:
        kernel::apply_controlled(amps, op.control_mask, op.a, {op.m[0], op.m[1], op.m[4], op.m[5]});
        break;
    }
  }
}

void FusedSequence::apply(DensityMatrix& rho) const {
  if (rho.n_qubits() != n_qubits_) throw Error(ErrorCode::kShape, "fused sequence register size mismatch");
  for (const Op& op : ops_) {
    switch (op.kind) {
      case Op::Kind::kSingle: rho.apply_controlled(0, op.a, {op.m[0], op.m[1], op.m[4], op.m[5]}); break;
      case Op::Kind::kPair:
      case Op::Kind::kPairDiagonal: rho.apply_pair(op.a, op.b, op.m); break;
      case Op::Kind::kControlled:
        rho.apply_controlled(op.control_mask, op.a, {op.m[0], op.m[1], op.m[4], op.m[5]});
        break;
    }
  }
}

StateVector run_sequence(StateVector initial, const GateSequence& seq, const std::optional<NoiseModel>& noise) {
  if (noise.has_value()) {
    throw Error(ErrorCode::kBackendMismatch, "noise requires the density-matrix backend");
  }
  if (seq.n_qubits != initial.n_qubits()) throw Error(ErrorCode::kShape, "sequence and state sizes differ");
  for (const Gate& g : seq.gates) initial.apply(g);
  return initial;
}

DensityMatrix run_sequence(DensityMatrix initial, const GateSequence& seq, const std::optional<NoiseModel>& noise) {
  if (seq.n_qubits != initial.n_qubits()) throw Error(ErrorCode::kShape, "sequence and state sizes differ");
  if (noise) noise->validate();
  for (const Gate& g : seq.gates) {
    initial.apply(g);
    if (noise && noise->eta > 0.0) {
      for (int i = 0; i < g.arity; ++i) initial.depolarize(g.qubits[static_cast<std::size_t>(i)], noise->eta);
    }
  }
  return initial;
}

std::vector<double> measurement_distribution(const StateVector& psi) {
  std::vector<double> p(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) p[i] = std::norm(psi[i]);
  return p;
}

std::vector<double> measurement_distribution(const DensityMatrix& rho) {
  std::vector<double> p = rho.diagonal();
  for (double& v : p) v = std::max(v, 0.0);
  return p;
}

std::map<std::uint64_t, std::uint64_t> sample_shots(std::span<const double> dist, std::uint64_t shots,
                                                    std::uint64_t seed) {
  std::map<std::uint64_t, std::uint64_t> counts;
  if (shots == 0) return counts;
  std::vector<double> cdf(dist.size());
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] < -1e-12) throw Error(ErrorCode::kNormalization, "negative probability");
    total += std::max(dist[i], 0.0);
    cdf[i] = total;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kNormalization, "distribution has no mass");
  Rng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    // Skip zero-probability entries that share the same cumulative value.
    while (dist[static_cast<std::size_t>(it - cdf.begin())] <= 0.0 && it != cdf.end() - 1) ++it;
    ++counts[static_cast<std::uint64_t>(it - cdf.begin())];
  }
  return counts;
}

std::vector<double> counts_to_distribution(const std::map<std::uint64_t, std::uint64_t>& counts, std::size_t dim) {
  std::vector<double> p(dim, 0.0);
  std::uint64_t total = 0;
  for (const auto& [k, v] : counts) total += v;
  if (total == 0) return p;
  for (const auto& [k, v] : counts) {
    if (k >= dim) throw Error(ErrorCode::kIndex, "outcome outside distribution range");
    p[k] = static_cast<double>(v) / static_cast<double>(total);
  }
  return p;
}

double expectation_diagonal(std::span<const double> dist, std::span<const double> values) {
  if (dist.size() != values.size()) throw Error(ErrorCode::kShape, "value table does not match state size");
  double s = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) s += dist[i] * values[i];
  return s;
}

double expectation_diagonal(const StateVector& psi, std::span<const double> values) {
  return expectation_diagonal(measurement_distribution(psi), values);
}

double expectation_diagonal(const DensityMatrix& rho, std::span<const double> values) {
  return expectation_diagonal(rho.diagonal(), values);
}

}  // namespace tqaoa
