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

#include "tqaoa/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tqaoa {
namespace {

void check_shape(const PortfolioInstance& instance, const TernaryPortfolio& z) {
  if (z.size() != instance.n_assets) {
    throw Error(ErrorCode::kShape, "portfolio has " + std::to_string(z.size()) + " entries, instance has " +
                                       std::to_string(instance.n_assets) + " assets");
  }
}

void check_enumerable(const PortfolioInstance& instance) {
  if (instance.n_assets > kMaxEnumerationAssets) {
    throw Error(ErrorCode::kCapacity, "exhaustive enumeration is limited to " +
                                          std::to_string(kMaxEnumerationAssets) + " assets");
  }
}

// Visits all 3^N vectors in lexicographic order (-1 < 0 < +1, index 0 most
// significant).
template <typename Visit>
void for_each_ternary(int n, Visit&& visit) {
  std::vector<int> z(static_cast<std::size_t>(n), -1);
  while (true) {
    visit(static_cast<const std::vector<int>&>(z));
    int i = n - 1;
    while (i >= 0 && z[static_cast<std::size_t>(i)] == 1) {
      z[static_cast<std::size_t>(i)] = -1;
      --i;
    }
    if (i < 0) return;
    ++z[static_cast<std::size_t>(i)];
  }
}

double cost_of(const PortfolioInstance& instance, std::span<const int> z) {
  double risk = 0.0;
  double ret = 0.0;
  const int n = instance.n_assets;
  for (int i = 0; i < n; ++i) {
    const int zi = z[static_cast<std::size_t>(i)];
    if (zi == 0) continue;
    ret += instance.mu(i) * zi;
    for (int j = 0; j < n; ++j) {
      const int zj = z[static_cast<std::size_t>(j)];
      if (zj != 0) risk += instance.sigma(i, j) * zi * zj;
    }
  }
  return instance.q * risk - (1.0 - instance.q) * ret;
}

int zero_count(std::span<const int> z) {
  return static_cast<int>(std::count(z.begin(), z.end(), 0));
}

}  // namespace

TernaryPortfolio::TernaryPortfolio(std::vector<int> z) : z_(std::move(z)) {
  for (int v : z_) {
    if (v < -1 || v > 1) throw Error(ErrorCode::kParameter, "ternary entries must be -1, 0 or +1");
  }
}

TernaryPortfolio TernaryPortfolio::parse(std::string_view text) {
  std::vector<int> z;
  for (char c : text) {
    switch (c) {
      case '+': z.push_back(1); break;
      case '-': z.push_back(-1); break;
      case '0': z.push_back(0); break;
      default: throw Error(ErrorCode::kParameter, "invalid ternary character '" + std::string(1, c) + "'");
    }
  }
  return TernaryPortfolio(std::move(z));
}

int TernaryPortfolio::sum() const {
  int s = 0;
  for (int v : z_) s += v;
  return s;
}

std::string TernaryPortfolio::to_string() const {
  std::string s;
  for (int v : z_) s.push_back(v > 0 ? '+' : (v < 0 ? '-' : '0'));
  return s;
}

std::string EncodedBitstring::to_string() const { return index_to_bitstring(bits, n_qubits); }

EncodedBitstring EncodedBitstring::parse(std::string_view text) {
  return EncodedBitstring{bitstring_to_index(text), static_cast<int>(text.size())};
}

std::string index_to_bitstring(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int k = 0; k < n_qubits; ++k) {
    if ((index >> k) & 1U) s[static_cast<std::size_t>(k)] = '1';
  }
  return s;
}

std::uint64_t bitstring_to_index(std::string_view bits) {
  if (bits.size() > 63) throw Error(ErrorCode::kCapacity, "bitstring longer than 63 positions");
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == '1') {
      index |= std::uint64_t{1} << k;
    } else if (bits[k] != '0') {
      throw Error(ErrorCode::kParameter, "bitstring may only contain '0' and '1'");
    }
  }
  return index;
}

std::string reverse_bit_order(std::string_view bits) { return std::string(bits.rbegin(), bits.rend()); }

TernaryPortfolio decode(const EncodedBitstring& bits) {
  if (bits.n_qubits % 2 != 0) throw Error(ErrorCode::kShape, "encoded bitstring must have even length");
  return decode_index(bits.bits, bits.n_qubits / 2);
}

TernaryPortfolio decode_index(std::uint64_t index, int n_assets) {
  std::vector<int> z(static_cast<std::size_t>(n_assets));
  for (int i = 0; i < n_assets; ++i) {
    const int minus = static_cast<int>((index >> short_qubit(i)) & 1U);
    const int plus = static_cast<int>((index >> long_qubit(i)) & 1U);
    z[static_cast<std::size_t>(i)] = plus - minus;
  }
  return TernaryPortfolio(std::move(z));
}

EncodedBitstring encode(const TernaryPortfolio& z) {
  EncodedBitstring out{0, 2 * z.size()};
  for (int i = 0; i < z.size(); ++i) {
    if (z[i] > 0) out.bits |= std::uint64_t{1} << long_qubit(i);
    if (z[i] < 0) out.bits |= std::uint64_t{1} << short_qubit(i);
  }
  return out;
}

nlohmann::json FeasibleSetSummary::to_json() const {
  nlohmann::json argmins = nlohmann::json::array();
  for (const auto& z : argmin_set) argmins.push_back(z.to_string());
  return {{"f_min", f_min},       {"f_max", f_max},   {"argmin", argmins},
          {"feasible_count", feasible_count}, {"budget", budget}, {"degenerate", degenerate}};
}

double cost(const PortfolioInstance& instance, const TernaryPortfolio& z) {
  check_shape(instance, z);
  return cost_of(instance, z.values());
}

double penalized_cost(const PortfolioInstance& instance, const TernaryPortfolio& z, const PenaltyModel& penalty) {
  check_shape(instance, z);
  const double g = static_cast<double>(z.sum() - penalty.budget);
  return cost_of(instance, z.values()) + penalty.coefficient_a * g * g;
}

FeasibleSetSummary enumerate_feasible(const PortfolioInstance& instance, const std::optional<PenaltyModel>& penalty) {
  check_enumerable(instance);
  (void)penalty;
  FeasibleSetSummary summary;
  summary.budget = instance.budget;
  summary.f_min = std::numeric_limits<double>::infinity();
  summary.f_max = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::vector<int>, double>> feasible;
  for_each_ternary(instance.n_assets, [&](const std::vector<int>& z) {
    int s = 0;
    for (int v : z) s += v;
    if (s != instance.budget) return;
    const double f = cost_of(instance, z);
    feasible.emplace_back(z, f);
    summary.f_min = std::min(summary.f_min, f);
    summary.f_max = std::max(summary.f_max, f);
  });
  summary.feasible_count = feasible.size();
  if (feasible.empty()) throw Error(ErrorCode::kParameter, "budget admits no feasible portfolio");
  const double tol = 1e-12 * std::max(1.0, std::abs(summary.f_min));
  for (const auto& [z, f] : feasible) {
    if (f - summary.f_min <= tol) summary.argmin_set.emplace_back(z);
  }
  summary.degenerate = summary.f_min == summary.f_max;
  return summary;
}

std::uint64_t feasible_encoding_count(int n_assets, int budget) {
  const int n = 2 * n_assets;
  const int k = n_assets + budget;
  if (k < 0 || k > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= std::min(k, n - k); ++i) c = c * static_cast<std::uint64_t>(n - i + 1) / static_cast<std::uint64_t>(i);
  return c;
}

PenaltyEstimate estimate_penalty_coefficient_traced(const PortfolioInstance& instance) {
  check_enumerable(instance);
  struct Entry {
    std::vector<int> z;
    double f;
    int g;
  };
  std::vector<Entry> infeasible;
  double feasible_min = std::numeric_limits<double>::infinity();
  double weighted_sum = 0.0;
  for_each_ternary(instance.n_assets, [&](const std::vector<int>& z) {
    int s = 0;
    for (int v : z) s += v;
    const double f = cost_of(instance, z);
    const int g = s - instance.budget;
    if (g == 0) {
      feasible_min = std::min(feasible_min, f);
      weighted_sum += std::ldexp(f, zero_count(z));
    } else {
      infeasible.push_back(Entry{z, f, g});
    }
  });
  const double feasible_mean =
      weighted_sum / static_cast<double>(feasible_encoding_count(instance.n_assets, instance.budget));
  const double threshold = 0.5 * (feasible_min + feasible_mean);

  PenaltyEstimate estimate;
  estimate.model.budget = instance.budget;
  double a = 0.0;
  if (infeasible.empty()) {
    estimate.model.coefficient_a = 0.0;
    return estimate;
  }
  for (int iter = 0; iter < kMaxPenaltyIterations; ++iter) {
    const Entry* best = nullptr;
    double best_value = std::numeric_limits<double>::infinity();
    for (const auto& e : infeasible) {
      const double v = e.f + a * static_cast<double>(e.g) * static_cast<double>(e.g);
      if (v < best_value) {
        best_value = v;
        best = &e;
      }
    }
    estimate.iterations.push_back(
        PenaltyIteration{a, feasible_min, feasible_mean, best_value, TernaryPortfolio(best->z)});
    if (best_value >= threshold) {
      estimate.model.coefficient_a = a;
      return estimate;
    }
    // Raise A until this portfolio sits on the threshold. The division can
    // round a hair short, which would stall the loop on a zero-size step.
    const double g = static_cast<double>(best->g);
    double next = a + (threshold - best_value) / (g * g);
    while (best->f + next * g * g < threshold) next = std::nextafter(next, std::numeric_limits<double>::infinity());
    a = next;
  }
  throw PenaltyEstimationError("penalty search did not separate the infeasible minimum within " +
                                   std::to_string(kMaxPenaltyIterations) + " iterations",
                               a);
}

PenaltyModel estimate_penalty_coefficient(const PortfolioInstance& instance) {
  return estimate_penalty_coefficient_traced(instance).model;
}

double approximation_ratio(const PortfolioInstance& instance, const FeasibleSetSummary& summary,
                           const TernaryPortfolio& z) {
  check_shape(instance, z);
  if (z.sum() != summary.budget) return 0.0;
  if (summary.degenerate) return 1.0;
  const double r = (cost_of(instance, z.values()) - summary.f_max) / (summary.f_min - summary.f_max);
  return std::clamp(r, 0.0, 1.0);
}

EncodedLandscape EncodedLandscape::build(const PortfolioInstance& instance, const FeasibleSetSummary& summary,
                                         const PenaltyModel& penalty) {
  if (2 * instance.n_assets > 24) throw Error(ErrorCode::kCapacity, "encoded landscape limited to 24 qubits");
  EncodedLandscape out;
  out.n_assets = instance.n_assets;
  const std::size_t dim = std::size_t{1} << (2 * instance.n_assets);
  out.cost.resize(dim);
  out.penalized_cost.resize(dim);
  out.ratio.resize(dim);
  out.feasible.resize(dim);
  out.optimal.resize(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    const TernaryPortfolio z = decode_index(x, instance.n_assets);
    const double f = cost_of(instance, z.values());
    const double g = static_cast<double>(z.sum() - penalty.budget);
    out.cost[x] = f;
    out.penalized_cost[x] = f + penalty.coefficient_a * g * g;
    out.feasible[x] = z.sum() == summary.budget;
    out.ratio[x] = approximation_ratio(instance, summary, z);
    out.optimal[x] = std::binary_search(summary.argmin_set.begin(), summary.argmin_set.end(), z);
  }
  return out;
}

DistributionMetrics distribution_metrics(const EncodedLandscape& landscape, std::span<const double> dist) {
  if (dist.size() != landscape.ratio.size()) {
    throw Error(ErrorCode::kShape, "distribution size does not match 4^N");
  }
  double total = 0.0;
  DistributionMetrics m;
  for (std::size_t x = 0; x < dist.size(); ++x) {
    if (dist[x] < 0.0) throw Error(ErrorCode::kNormalization, "negative probability");
    total += dist[x];
    m.r_bar += dist[x] * landscape.ratio[x];
    if (landscape.optimal[x]) m.p_opt += dist[x];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kNormalization, "probabilities sum to " + std::to_string(total));
  }
  return m;
}

DistributionMetrics distribution_metrics(const PortfolioInstance& instance, const FeasibleSetSummary& summary,
                                         std::span<const double> dist) {
  return distribution_metrics(EncodedLandscape::build(instance, summary, PenaltyModel{0.0, summary.budget}), dist);
}

}  // namespace tqaoa
