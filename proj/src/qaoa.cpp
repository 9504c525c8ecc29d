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

#include "tqaoa/qaoa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "tqaoa/error.hpp"

namespace tqaoa {
namespace {

constexpr double kPi = std::numbers::pi;

double reflect_gamma(double g) {
  if (!std::isfinite(g)) return g;
  double y = std::fmod(std::abs(g), 2.0 * kPi);
  if (y > kPi) y = 2.0 * kPi - y;
  return y;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

// Piecewise-linear through (xs, ys) with linear extrapolation past the ends.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  std::size_t k = 1;
  while (k + 1 < xs.size() && x > xs[k]) ++k;
  const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

}  // namespace

void QaoaParams::validate() const {
  if (gamma.size() != beta.size()) throw Error(ErrorCode::kShape, "gamma and beta lengths differ");
  if (gamma.empty()) throw Error(ErrorCode::kShape, "depth must be at least 1");
  for (double g : gamma) {
    if (!(g >= 0.0 && g <= kPi)) throw Error(ErrorCode::kParameter, "gamma outside [0, pi]");
  }
  for (double b : beta) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw Error(ErrorCode::kParameter, "beta must be finite and nonnegative");
  }
}

std::vector<double> QaoaParams::flatten() const {
  std::vector<double> x(gamma);
  x.insert(x.end(), beta.begin(), beta.end());
  return x;
}

QaoaParams QaoaParams::unflatten(const std::vector<double>& x) {
  if (x.size() % 2 != 0) throw Error(ErrorCode::kShape, "flattened parameter vector has odd length");
  const auto p = static_cast<std::ptrdiff_t>(x.size() / 2);
  return {std::vector<double>(x.begin(), x.begin() + p), std::vector<double>(x.begin() + p, x.end())};
}

nlohmann::json QaoaParams::to_json() const { return {{"gamma", gamma}, {"beta", beta}}; }

QaoaParams QaoaParams::from_json(const nlohmann::json& j) {
  QaoaParams p{j.at("gamma").get<std::vector<double>>(), j.at("beta").get<std::vector<double>>()};
  p.validate();
  return p;
}

QaoaParams project_params(QaoaParams params) {
  for (double& g : params.gamma) g = reflect_gamma(g);
  for (double& b : params.beta) b = std::max(b, 0.0);
  return params;
}

std::string backend_name(const Backend& b) {
  if (std::holds_alternative<StatevectorBackend>(b)) return "statevector";
  if (std::holds_alternative<SampledBackend>(b)) return "sampled";
  return "density";
}

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kSimplex ? "simplex" : "finite-difference-gradient";
}

OptimizerKind default_optimizer(const Backend& b) {
  return std::holds_alternative<StatevectorBackend>(b) ? OptimizerKind::kFiniteDifference : OptimizerKind::kSimplex;
}

std::vector<double> GridSpec::m1_values() const { return linspace(m1_min, m1_max, resolution); }
std::vector<double> GridSpec::m2_values() const { return linspace(m2_min, m2_max, resolution); }

nlohmann::json GridSpec::to_json() const {
  return {{"m1", {m1_min, m1_max}}, {"m2", {m2_min, m2_max}}, {"resolution", resolution}};
}

void QaoaConfig::validate(int n_assets) const {
  if (depth < 1) throw Error(ErrorCode::kParameter, "depth must be at least 1");
  if (evaluations_per_layer < 1) throw Error(ErrorCode::kParameter, "evaluation budget must be positive");
  if (const auto* s = std::get_if<SampledBackend>(&backend); s && s->shots < 1) {
    throw Error(ErrorCode::kParameter, "sampled backend needs at least one shot");
  }
  if (const auto* d = std::get_if<DensityBackend>(&backend)) {
    NoiseModel{d->eta}.validate();
    if (2 * n_assets > kMaxDensityQubits) {
      throw Error(ErrorCode::kCapacity, "density backend supports at most " + std::to_string(kMaxDensityQubits) +
                                            " qubits, got " + std::to_string(2 * n_assets));
    }
  }
  if (2 * n_assets > kMaxStateVectorQubits) {
    throw Error(ErrorCode::kCapacity, "simulators support at most " + std::to_string(kMaxStateVectorQubits) +
                                          " qubits, got " + std::to_string(2 * n_assets));
  }
}

GateSequence initial_state_circuit(MixerKind mixer, int n_assets, int budget) {
  return preserves_budget(mixer) ? build_dicke_initial(n_assets, budget) : build_uniform_initial(2 * n_assets);
}

GateSequence ansatz_body(const CostCoefficients& coeffs, MixerKind mixer, const QaoaParams& params) {
  const int n = coeffs.n_assets();
  GateSequence seq(2 * n);
  for (int l = 0; l < params.depth(); ++l) {
    const double g = params.gamma[static_cast<std::size_t>(l)];
    const double b = params.beta[static_cast<std::size_t>(l)];
    seq.barrier("layer " + std::to_string(l + 1));
    if (mixer == MixerKind::kQAMPA) {
      seq.append(build_qampa_layer(coeffs, b, g));
    } else {
      seq.append(build_cost_unitary(coeffs, g));
      seq.append(mixer == MixerKind::kStandard ? build_standard_mixer(2 * n, b) : build_xy_mixer(mixer, n, b));
    }
  }
  return seq;
}

GateSequence assemble_ansatz(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config,
                             const QaoaParams& params) {
  if (params.gamma.size() != params.beta.size() || params.depth() != config.depth) {
    throw Error(ErrorCode::kShape, "parameter length does not match configured depth");
  }
  const auto coeffs = build_cost_coefficients(instance, penalty, config.mixer);
  GateSequence seq = initial_state_circuit(config.mixer, instance.n_assets, instance.budget);
  seq.barrier("initial");
  seq.append(ansatz_body(coeffs, config.mixer, params));
  return seq;
}

Evaluator::Evaluator(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config)
    : instance_(instance), penalty_(penalty), config_(config) {
  instance.validate();
  config.validate(instance.n_assets);
  coeffs_ = build_cost_coefficients(instance, penalty, config.mixer);
  summary_ = enumerate_feasible(instance);
  landscape_ = EncodedLandscape::build(instance, summary_, penalty);
  scaled_cost_.resize(landscape_.penalized_cost.size());
  for (std::size_t x = 0; x < scaled_cost_.size(); ++x) scaled_cost_[x] = coeffs_.lambda * landscape_.penalized_cost[x];

  const auto init = initial_state_circuit(config.mixer, instance.n_assets, instance.budget);
  if (const auto* d = std::get_if<DensityBackend>(&config.backend)) {
    initial_dm_ = run_sequence(DensityMatrix(2 * instance.n_assets), init, NoiseModel{d->eta});
  } else {
    initial_sv_ = run_sequence(StateVector(2 * instance.n_assets), init);
  }
}

std::vector<double> Evaluator::exact_distribution(const QaoaParams& params) const {
  const GateSequence body = ansatz_body(coeffs_, config_.mixer, params);
  if (initial_sv_) {
    StateVector psi = *initial_sv_;
    FusedSequence::compile(body).apply(psi);
    return measurement_distribution(psi);
  }
  const double eta = std::get<DensityBackend>(config_.backend).eta;
  DensityMatrix rho = *initial_dm_;
  if (eta == 0.0) {
    FusedSequence::compile(body).apply(rho);
  } else {
    rho = run_sequence(std::move(rho), body, NoiseModel{eta});
  }
  return measurement_distribution(rho);
}

std::vector<double> Evaluator::sample(const std::vector<double>& exact, std::uint64_t shots, std::uint64_t seed) const {
  return counts_to_distribution(sample_shots(exact, shots, seed), exact.size());
}

std::vector<double> Evaluator::reported_distribution(const QaoaParams& params) const {
  auto exact = exact_distribution(params);
  if (const auto* s = std::get_if<SampledBackend>(&config_.backend)) return sample(exact, s->shots, s->seed);
  if (const auto* d = std::get_if<DensityBackend>(&config_.backend); d && d->shots > 0) {
    return sample(exact, d->shots, d->seed);
  }
  return exact;
}

double Evaluator::objective(const QaoaParams& params) const {
  std::vector<double> dist = exact_distribution(params);
  if (const auto* s = std::get_if<SampledBackend>(&config_.backend)) dist = sample(dist, s->shots, s->seed);
  return expectation_diagonal(dist, scaled_cost_);
}

DistributionMetrics Evaluator::metrics(const QaoaParams& params) const {
  return distribution_metrics(landscape_, reported_distribution(params));
}

double evaluate_objective(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config,
                          const QaoaParams& params) {
  if (params.depth() != config.depth) throw Error(ErrorCode::kShape, "parameter length does not match configured depth");
  return Evaluator(instance, penalty, config).objective(params);
}

std::vector<double> ramp_positions(int p) {
  std::vector<double> x(static_cast<std::size_t>(p));
  for (int i = 1; i <= p; ++i) x[static_cast<std::size_t>(i - 1)] = (2.0 * i - 1.0) / (2.0 * p);
  return x;
}

QaoaParams linear_ramp_params(int p, double m1, double m2) {
  if (p < 1) throw Error(ErrorCode::kParameter, "depth must be at least 1");
  QaoaParams out;
  for (double x : ramp_positions(p)) {
    out.gamma.push_back(m1 * x);
    out.beta.push_back(m2 * (1.0 - x));
  }
  return out;
}

GridResult grid_search_p1(const Evaluator& evaluator, const GridSpec& grid) {
  if (grid.resolution < 1) throw Error(ErrorCode::kParameter, "grid resolution must be positive");
  GridResult r;
  r.m1_values = grid.m1_values();
  r.m2_values = grid.m2_values();
  r.landscape.resize(grid.resolution, grid.resolution);
  r.objective = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      const double m1 = r.m1_values[static_cast<std::size_t>(i)];
      const double m2 = r.m2_values[static_cast<std::size_t>(j)];
      const double v = evaluator.objective(project_params(linear_ramp_params(1, m1, m2)));
      r.landscape(i, j) = v;
      if (v < r.objective) {
        r.objective = v;
        r.m1 = m1;
        r.m2 = m2;
      }
    }
  }
  return r;
}

GridResult grid_search_p1(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config,
                          const GridSpec& grid) {
  return grid_search_p1(Evaluator(instance, penalty, config), grid);
}

void write_landscape_csv(std::ostream& os, const GridResult& grid) {
  os.precision(17);
  os << "m1\\m2";
  for (double m2 : grid.m2_values) os << ',' << m2;
  os << '\n';
  for (Eigen::Index i = 0; i < grid.landscape.rows(); ++i) {
    os << grid.m1_values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < grid.landscape.cols(); ++j) os << ',' << grid.landscape(i, j);
    os << '\n';
  }
}

std::string_view to_string(TransferStrategy s) {
  switch (s) {
    case TransferStrategy::kInterpolate: return "interp";
    case TransferStrategy::kAppendLast: return "append-last";
    case TransferStrategy::kAppendZero: return "append-zero";
    case TransferStrategy::kRampFit: return "ramp-fit";
  }
  return "unknown";
}

QaoaParams transfer_params(const QaoaParams& prev, TransferStrategy strategy) {
  if (prev.depth() < 1 || prev.gamma.size() != prev.beta.size()) {
    throw Error(ErrorCode::kShape, "previous schedule must have depth >= 1");
  }
  const int p = prev.depth() + 1;
  QaoaParams out = prev;
  switch (strategy) {
    case TransferStrategy::kAppendLast:
      out.gamma.push_back(prev.gamma.back());
      out.beta.push_back(prev.beta.back());
      break;
    case TransferStrategy::kAppendZero:
      out.gamma.push_back(0.0);
      out.beta.push_back(0.0);
      break;
    case TransferStrategy::kInterpolate: {
      if (prev.depth() == 1) {
        // A single point only fixes the ramp through the origin.
        return linear_ramp_params(p, 2.0 * prev.gamma[0], 2.0 * prev.beta[0]);
      }
      const auto xs = ramp_positions(prev.depth());
      out = {};
      for (double x : ramp_positions(p)) {
        out.gamma.push_back(interpolate(xs, prev.gamma, x));
        out.beta.push_back(interpolate(xs, prev.beta, x));
      }
      break;
    }
    case TransferStrategy::kRampFit: {
      const auto xs = ramp_positions(prev.depth());
      double sgx = 0, sxx = 0, sb = 0, syy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sgx += prev.gamma[i] * xs[i];
        sxx += xs[i] * xs[i];
        sb += prev.beta[i] * (1.0 - xs[i]);
        syy += (1.0 - xs[i]) * (1.0 - xs[i]);
      }
      return linear_ramp_params(p, sgx / sxx, sb / syy);
    }
  }
  return out;
}

void OptimizationTrace::record(const QaoaParams& params, double objective) {
  iterations.push_back({params, objective});
  ++evaluations_count;
  if (iterations.size() == 1 || objective < best_objective) {
    best_objective = objective;
    best_params = params;
  }
}

void OptimizationTrace::write_jsonl(std::ostream& os) const {
  for (std::size_t k = 0; k < iterations.size(); ++k) {
    nlohmann::json j = iterations[k].params.to_json();
    j["eval"] = k;
    j["objective"] = iterations[k].objective;
    os << j.dump() << '\n';
  }
}

OptimizationTrace optimize(const Evaluator& evaluator, const QaoaParams& initial) {
  if (initial.gamma.size() != initial.beta.size() || initial.depth() < 1) {
    throw Error(ErrorCode::kShape, "malformed initial parameters");
  }
  const QaoaConfig& cfg = evaluator.config();
  OptimizationTrace trace;
  const Objective f = [&](const std::vector<double>& x) {
    const QaoaParams params = QaoaParams::unflatten(x);
    const double v = evaluator.objective(params);
    trace.record(params, v);
    if (!std::isfinite(v)) throw OptimizationAbortError("objective is not finite", trace);
    return v;
  };
  const Projection proj = [](const std::vector<double>& x) {
    return project_params(QaoaParams::unflatten(x)).flatten();
  };
  OptimizerOptions opt;
  opt.tolerance = cfg.tolerance;
  opt.max_evaluations = cfg.evaluations_per_layer * initial.depth();
  const auto result = cfg.optimizer == OptimizerKind::kSimplex ? nelder_mead(f, initial.flatten(), opt, proj)
                                                               : finite_difference_descent(f, initial.flatten(), opt, proj);
  trace.converged = result.converged;
  return trace;
}

OptimizationTrace optimize(const PortfolioInstance& instance, const PenaltyModel& penalty, const QaoaConfig& config,
                           const QaoaParams& initial) {
  if (initial.depth() != config.depth) throw Error(ErrorCode::kShape, "parameter length does not match configured depth");
  return optimize(Evaluator(instance, penalty, config), initial);
}

std::vector<DepthResult> depth_sweep(const Evaluator& ev, int max_depth, bool optimize_all_starts) {
  if (max_depth < 1) throw Error(ErrorCode::kParameter, "max depth must be at least 1");
  std::vector<DepthResult> out;
  for (int p = 1; p <= max_depth; ++p) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, QaoaParams>> starts;
    int extra = 0;
    if (p == 1) {
      const auto g = grid_search_p1(ev, ev.config().grid);
      starts.emplace_back("grid", project_params(linear_ramp_params(1, g.m1, g.m2)));
      extra = ev.config().grid.resolution * ev.config().grid.resolution;
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (TransferStrategy s : kAllTransferStrategies) {
        auto cand = project_params(transfer_params(out.back().params, s));
        if (optimize_all_starts) {
          starts.emplace_back(std::string(to_string(s)), std::move(cand));
          continue;
        }
        const double v = ev.objective(cand);
        ++extra;
        if (v < best) {
          best = v;
          starts.assign(1, {std::string(to_string(s)), std::move(cand)});
        }
      }
    }
    DepthResult r;
    r.p = p;
    r.objective = std::numeric_limits<double>::infinity();
    r.evaluations = extra;
    for (const auto& [name, start] : starts) {
      const auto trace = optimize(ev, start);
      r.evaluations += trace.evaluations_count;
      if (trace.best_objective < r.objective) {
        r.objective = trace.best_objective;
        r.params = trace.best_params;
        r.start = name;
      }
    }
    r.metrics = ev.metrics(r.params);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DepthResult> depth_sweep(const PortfolioInstance& instance, const PenaltyModel& penalty,
                                     const QaoaConfig& config, int max_depth, bool optimize_all_starts) {
  return depth_sweep(Evaluator(instance, penalty, config), max_depth, optimize_all_starts);
}

}  // namespace tqaoa
