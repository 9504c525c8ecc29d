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

#include "tqaoa/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "tqaoa/error.hpp"
#include "tqaoa/random.hpp"
#include "tqaoa/version.hpp"

namespace tqaoa {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_params(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num(v[i]);
  return s;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

int mixer_rank(MixerKind k) { return static_cast<int>(k); }

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(w, n); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t instance, MixerKind mixer) {
  return mix_seed(master, 64 * instance + static_cast<std::uint64_t>(mixer_rank(mixer)));
}

PenaltyModel penalty_for(MixerKind mixer, const PortfolioInstance& inst) {
  if (mixer == MixerKind::kStandard) return estimate_penalty_coefficient(inst);
  return {0.0, inst.budget};
}

RunResult base_row(const ExperimentSpec& spec, std::size_t i, MixerKind mixer, int p) {
  RunResult r;
  r.instance_id = spec.instances[i].id;
  r.mixer = mixer;
  r.p = p;
  r.master_seed = spec.master_seed;
  r.seed = cell_seed(spec.master_seed, i, mixer);
  r.backend = std::string(to_string(spec.backend));
  return r;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<NamedInstance> random_instances(int n_assets, int budget, double q, int count, std::uint64_t master_seed) {
  std::vector<NamedInstance> out;
  for (int k = 0; k < count; ++k) {
    out.push_back({"rand-" + std::to_string(k),
                   random_instance(n_assets, budget, q, mix_seed(master_seed, static_cast<std::uint64_t>(k)))});
  }
  return out;
}

std::string_view to_string(BackendChoice b) {
  switch (b) {
    case BackendChoice::kStatevector: return "statevector";
    case BackendChoice::kSampled: return "sampled";
    case BackendChoice::kDensity: return "density";
  }
  return "unknown";
}

BackendChoice backend_from_string(std::string_view name) {
  for (auto b : {BackendChoice::kStatevector, BackendChoice::kSampled, BackendChoice::kDensity}) {
    if (to_string(b) == name) return b;
  }
  throw Error(ErrorCode::kConfiguration, "unknown backend '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  if (instances.empty()) throw Error(ErrorCode::kParameter, "no instances");
  if (mixers.empty()) throw Error(ErrorCode::kParameter, "no mixers");
  if (depths.empty()) throw Error(ErrorCode::kParameter, "no depths");
  for (int p : depths) {
    if (p < 1) throw Error(ErrorCode::kParameter, "depths must be >= 1");
  }
  if (etas.empty()) throw Error(ErrorCode::kParameter, "no noise strengths");
  for (double e : etas) NoiseModel{e}.validate();
  // the density backend reports exact metrics when shots is 0
  if (backend == BackendChoice::kSampled && shots < 1) throw Error(ErrorCode::kParameter, "shots must be >= 1");
  if (refine_evaluations < 0) throw Error(ErrorCode::kParameter, "refine budget must be >= 0");
}

void sort_results(std::vector<RunResult>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const RunResult& a, const RunResult& b) {
    return std::tuple(a.instance_id, mixer_rank(a.mixer), a.p, a.eta) <
           std::tuple(b.instance_id, mixer_rank(b.mixer), b.p, b.eta);
  });
}

std::vector<RunResult> run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const int max_p = *std::max_element(spec.depths.begin(), spec.depths.end());
  const std::size_t n_cells = spec.instances.size() * spec.mixers.size();
  std::vector<std::vector<RunResult>> per_cell(n_cells);

  parallel_for(n_cells, spec.workers, [&](std::size_t c) {
    const std::size_t i = c / spec.mixers.size();
    const MixerKind mixer = spec.mixers[c % spec.mixers.size()];
    const auto& inst = spec.instances[i].instance;
    auto& rows = per_cell[c];
    const std::uint64_t seed = cell_seed(spec.master_seed, i, mixer);
    try {
      QaoaConfig cfg;
      cfg.mixer = mixer;
      cfg.grid = spec.grid;
      switch (spec.backend) {
        case BackendChoice::kStatevector: cfg.backend = StatevectorBackend{}; break;
        case BackendChoice::kSampled: cfg.backend = SampledBackend{spec.shots, seed}; break;
        case BackendChoice::kDensity: cfg.backend = DensityBackend{spec.etas.front(), spec.shots, seed}; break;
      }
      cfg.optimizer = default_optimizer(cfg.backend);
      const PenaltyModel pen = penalty_for(mixer, inst);
      const Evaluator ev(inst, pen, cfg);
      const auto sweep = depth_sweep(ev, max_p, spec.optimize_all_starts);
      for (int p : spec.depths) {
        const DepthResult& d = sweep[static_cast<std::size_t>(p - 1)];
        RunResult r = base_row(spec, i, mixer, p);
        r.eta = spec.backend == BackendChoice::kDensity ? spec.etas.front() : 0.0;
        r.shots = spec.backend == BackendChoice::kStatevector ? 0 : spec.shots;
        r.r_bar = d.metrics.r_bar;
        r.p_opt = d.metrics.p_opt;
        r.objective = d.objective;
        r.penalty_a = pen.coefficient_a;
        r.best_params = d.params;
        r.start = d.start;
        double t = 0.0;
        for (int k = 0; k < p; ++k) t += sweep[static_cast<std::size_t>(k)].wall_time;
        r.wall_time = t;
        rows.push_back(std::move(r));
      }
    } catch (const std::exception& e) {
      rows.clear();
      for (int p : spec.depths) {
        RunResult r = base_row(spec, i, mixer, p);
        r.r_bar = r.p_opt = r.objective = std::nan("");
        r.error = e.what();
        rows.push_back(std::move(r));
      }
    }
  });

  std::vector<RunResult> out;
  for (auto& v : per_cell) out.insert(out.end(), v.begin(), v.end());
  sort_results(out);
  return out;
}

std::vector<RunResult> run_noise_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const int max_p = *std::max_element(spec.depths.begin(), spec.depths.end());
  const std::size_t n_cells = spec.instances.size() * spec.mixers.size();
  std::vector<std::vector<RunResult>> per_cell(n_cells);

  parallel_for(n_cells, spec.workers, [&](std::size_t c) {
    const std::size_t i = c / spec.mixers.size();
    const MixerKind mixer = spec.mixers[c % spec.mixers.size()];
    const auto& inst = spec.instances[i].instance;
    auto& rows = per_cell[c];
    const std::uint64_t seed = cell_seed(spec.master_seed, i, mixer);
    PenaltyModel pen;
    std::vector<DepthResult> clean;
    std::string failure;
    try {
      pen = penalty_for(mixer, inst);
      QaoaConfig cfg;
      cfg.mixer = mixer;
      cfg.grid = spec.grid;
      clean = depth_sweep(Evaluator(inst, pen, cfg), max_p, spec.optimize_all_starts);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    for (int p : spec.depths) {
      for (std::size_t k = 0; k < spec.etas.size(); ++k) {
        RunResult r = base_row(spec, i, mixer, p);
        r.backend = "density";
        r.eta = spec.etas[k];
        r.shots = spec.shots;
        r.seed = mix_seed(seed, 1000 * static_cast<std::uint64_t>(p) + k);
        r.penalty_a = pen.coefficient_a;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          if (!failure.empty()) throw Error(ErrorCode::kOptimizationAbort, failure);
          QaoaConfig cfg;
          cfg.mixer = mixer;
          cfg.depth = p;
          cfg.backend = DensityBackend{r.eta, spec.shots, r.seed};
          cfg.optimizer = OptimizerKind::kSimplex;
          cfg.evaluations_per_layer = std::max(1, spec.refine_evaluations);
          const Evaluator ev(inst, pen, cfg);
          QaoaParams params = clean[static_cast<std::size_t>(p - 1)].params;
          r.start = "noiseless";
          if (spec.refine_evaluations > 0 && r.eta > 0.0) {
            const auto trace = optimize(ev, params);
            params = trace.best_params;
            r.objective = trace.best_objective;
            r.start = "noiseless+refine";
          } else {
            r.objective = ev.objective(params);
          }
          const auto m = ev.metrics(params);
          r.r_bar = m.r_bar;
          r.p_opt = m.p_opt;
          r.best_params = params;
        } catch (const std::exception& e) {
          r.r_bar = r.p_opt = r.objective = std::nan("");
          r.error = e.what();
        }
        r.wall_time = seconds_since(t0);
        rows.push_back(std::move(r));
      }
    }
  });

  std::vector<RunResult> out;
  for (auto& v : per_cell) out.insert(out.end(), v.begin(), v.end());
  sort_results(out);
  return out;
}

std::optional<std::size_t> find_crossover(const std::vector<double>& reference,
                                          const std::vector<std::vector<double>>& others) {
  for (std::size_t k = 0; k < reference.size(); ++k) {
    bool all = true;
    for (const auto& o : others) {
      if (k >= o.size() || !(reference[k] >= o[k])) {
        all = false;
        break;
      }
    }
    if (all) return k;
  }
  return std::nullopt;
}

std::vector<CrossoverEntry> crossover_report(const std::vector<RunResult>& rows) {
  // mean metric per (p, mixer, eta)
  std::map<std::tuple<int, int, double>, std::pair<double, double>> sum;  // r_bar, p_opt
  std::map<std::tuple<int, int, double>, int> cnt;
  std::map<int, std::vector<double>> etas_by_p;
  for (const auto& r : rows) {
    if (!r.ok()) continue;
    const auto key = std::tuple(r.p, mixer_rank(r.mixer), r.eta);
    sum[key].first += r.r_bar;
    sum[key].second += r.p_opt;
    ++cnt[key];
    etas_by_p[r.p].push_back(r.eta);
  }
  std::vector<CrossoverEntry> out;
  for (auto& [p, etas] : etas_by_p) {
    std::sort(etas.begin(), etas.end());
    etas.erase(std::unique(etas.begin(), etas.end()), etas.end());
    for (int metric = 0; metric < 2; ++metric) {
      std::vector<double> ref;
      std::map<int, std::vector<double>> others;
      bool complete = true;
      for (std::size_t ei = 0; ei < etas.size(); ++ei) {
        const double e = etas[ei];
        for (MixerKind m : kAllMixers) {
          const auto key = std::tuple(p, mixer_rank(m), e);
          auto it = sum.find(key);
          if (it == sum.end()) continue;
          const double v = (metric == 0 ? it->second.first : it->second.second) / cnt[key];
          if (m == MixerKind::kStandard) {
            ref.push_back(v);
          } else if (is_xy_family(m)) {
            others[mixer_rank(m)].push_back(v);
          }
        }
        if (ref.size() != ei + 1) complete = false;
      }
      if (!complete || others.empty()) continue;
      std::vector<std::vector<double>> o;
      for (auto& [k, v] : others) o.push_back(v);
      CrossoverEntry entry{p, metric == 0 ? "r_bar" : "p_opt", std::nullopt};
      if (auto idx = find_crossover(ref, o)) entry.eta = etas[*idx];
      out.push_back(entry);
    }
  }
  return out;
}

nlohmann::json to_json(const std::vector<CrossoverEntry>& entries) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : entries) {
    j.push_back({{"p", e.p}, {"metric", e.metric}, {"eta", e.eta ? nlohmann::json(*e.eta) : nlohmann::json("none")}});
  }
  return j;
}

std::vector<AggregateRow> aggregate(const std::vector<RunResult>& rows) {
  std::map<std::tuple<int, int, double>, std::vector<const RunResult*>> groups;
  for (const auto& r : rows) {
    if (r.ok()) groups[std::tuple(mixer_rank(r.mixer), r.p, r.eta)].push_back(&r);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, g] : groups) {
    AggregateRow a;
    a.mixer = g.front()->mixer;
    a.p = std::get<1>(key);
    a.eta = std::get<2>(key);
    a.count = g.size();
    auto stats = [&](auto field, double& mean, double& sd) {
      double s = 0.0;
      for (const auto* r : g) s += r->*field;
      mean = s / static_cast<double>(g.size());
      double ss = 0.0;
      for (const auto* r : g) ss += (r->*field - mean) * (r->*field - mean);
      sd = g.size() > 1 ? std::sqrt(ss / static_cast<double>(g.size() - 1)) : 0.0;
    };
    stats(&RunResult::r_bar, a.r_bar_mean, a.r_bar_std);
    stats(&RunResult::p_opt, a.p_opt_mean, a.p_opt_std);
    out.push_back(a);
  }
  return out;
}

std::vector<DickeNoiseRow> run_dicke_noise(int n_assets, int budget, const std::vector<double>& etas,
                                           std::uint64_t shots, std::uint64_t master_seed) {
  if (2 * n_assets > kMaxDensityQubits) {
    throw Error(ErrorCode::kCapacity, "density backend supports at most " + std::to_string(kMaxDensityQubits) +
                                          " qubits, got " + std::to_string(2 * n_assets));
  }
  if (shots < 1) throw Error(ErrorCode::kParameter, "shots must be >= 1");
  const GateSequence prep = build_dicke_initial(n_assets, budget);
  std::vector<std::uint8_t> feasible(std::size_t{1} << (2 * n_assets));
  for (std::size_t x = 0; x < feasible.size(); ++x) feasible[x] = decode_index(x, n_assets).sum() == budget;
  std::vector<DickeNoiseRow> out;
  for (std::size_t k = 0; k < etas.size(); ++k) {
    DickeNoiseRow row;
    row.eta = etas[k];
    row.shots = shots;
    row.seed = mix_seed(master_seed, k);
    const auto rho = run_sequence(DensityMatrix(2 * n_assets), prep, NoiseModel{row.eta});
    const auto dist = measurement_distribution(rho);
    for (std::size_t x = 0; x < dist.size(); ++x) {
      if (feasible[x]) row.p_feasible_exact += dist[x];
    }
    std::uint64_t hits = 0;
    for (const auto& [x, c] : sample_shots(dist, shots, row.seed)) {
      if (feasible[x]) hits += c;
    }
    row.p_feasible = static_cast<double>(hits) / static_cast<double>(shots);
    row.stderr_binomial = std::sqrt(row.p_feasible * (1.0 - row.p_feasible) / static_cast<double>(shots));
    out.push_back(row);
  }
  return out;
}

std::vector<CircuitReportRow> circuit_report(int n_min, int n_max, double q, std::uint64_t seed) {
  if (n_min < 1 || n_max < n_min) throw Error(ErrorCode::kParameter, "bad asset range");
  std::vector<CircuitReportRow> out;
  for (int n = n_min; n <= n_max; ++n) {
    const int b = n / 2;
    out.push_back({"uniform-initial", n, b, 0, circuit_stats(build_uniform_initial(2 * n))});
    out.push_back({"dicke-initial", n, b, 0, circuit_stats(build_dicke_initial(n, b))});
    if (n < 2) continue;
    const auto inst = random_instance(n, b, q, seed);
    for (MixerKind m : kAllMixers) {
      const auto coeffs = build_cost_coefficients(inst, {0.0, b}, m);
      const QaoaParams one{{0.1}, {0.1}};
      out.push_back({std::string(to_string(m)), n, b, 1, circuit_stats(ansatz_body(coeffs, m, one))});
    }
  }
  return out;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::kShape, "linear fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kShape, "linear fit needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r_squared = syy == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0) : 1.0 - ss_res / syy;
  return f;
}

const CsvSchema& run_result_schema() {
  static const CsvSchema s{
      {"instance_id", "mixer", "p", "eta", "shots", "backend", "r_bar", "p_opt", "objective", "penalty_a", "gamma",
       "beta", "start", "wall_time", "master_seed", "seed", "status", "error"},
      {false, false, true, true, true, false, true, true, true, true, false, false, false, true, true, true, false,
       false}};
  return s;
}

const CsvSchema& aggregate_schema() {
  static const CsvSchema s{{"mixer", "p", "eta", "count", "r_bar_mean", "r_bar_std", "p_opt_mean", "p_opt_std"},
                           {false, true, true, true, true, true, true, true}};
  return s;
}

const CsvSchema& dicke_noise_schema() {
  static const CsvSchema s{{"eta", "p_feasible_exact", "p_feasible", "stderr", "shots", "seed"},
                           {true, true, true, true, true, true}};
  return s;
}

const CsvSchema& circuit_report_schema() {
  static const CsvSchema s{split(circuit_stats_csv_header(), ','), {false, true, true, true, true, true, true}};
  return s;
}

void write_csv_preamble(std::ostream& os, const std::string& invocation, const CsvSchema& schema) {
  os << "# tqaoa " << kVersion << ' ' << sanitize(invocation) << '\n';
  for (std::size_t i = 0; i < schema.columns.size(); ++i) os << (i ? "," : "") << schema.columns[i];
  os << '\n';
}

void write_rows(std::ostream& os, const std::vector<RunResult>& rows) {
  for (const auto& r : rows) {
    os << r.instance_id << ',' << to_string(r.mixer) << ',' << r.p << ',' << num(r.eta) << ',' << r.shots << ','
       << r.backend << ',' << num(r.r_bar) << ',' << num(r.p_opt) << ',' << num(r.objective) << ','
       << num(r.penalty_a) << ',' << join_params(r.best_params.gamma) << ',' << join_params(r.best_params.beta)
       << ',' << r.start << ',' << num(r.wall_time) << ',' << r.master_seed << ',' << r.seed << ','
       << (r.ok() ? "ok" : "error") << ',' << sanitize(r.error) << '\n';
  }
}

void write_rows(std::ostream& os, const std::vector<AggregateRow>& rows) {
  for (const auto& a : rows) {
    os << to_string(a.mixer) << ',' << a.p << ',' << num(a.eta) << ',' << a.count << ',' << num(a.r_bar_mean) << ','
       << num(a.r_bar_std) << ',' << num(a.p_opt_mean) << ',' << num(a.p_opt_std) << '\n';
  }
}

void write_rows(std::ostream& os, const std::vector<DickeNoiseRow>& rows) {
  for (const auto& r : rows) {
    os << num(r.eta) << ',' << num(r.p_feasible_exact) << ',' << num(r.p_feasible) << ',' << num(r.stderr_binomial)
       << ',' << r.shots << ',' << r.seed << '\n';
  }
}

void write_rows(std::ostream& os, const std::vector<CircuitReportRow>& rows) {
  for (const auto& r : rows) os << circuit_stats_csv_row(r.component, r.n_assets, r.budget, r.p, r.stats) << '\n';
}

void validate_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  auto fail = [&](std::size_t line, const std::string& why) {
    throw Error(ErrorCode::kData, path.string() + ":" + std::to_string(line) + ": " + why);
  };
  std::string line;
  std::size_t lineno = 0;
  bool saw_comment = false, saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!saw_header && !line.empty() && line[0] == '#') {
      saw_comment = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (!saw_header) {
      if (!saw_comment) fail(lineno, "missing comment preamble");
      if (fields != schema.columns) fail(lineno, "header does not match schema");
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    if (fields.size() != schema.columns.size()) fail(lineno, "wrong field count");
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!schema.numeric[k]) continue;
      const char* s = fields[k].c_str();
      char* end = nullptr;
      std::strtod(s, &end);
      if (fields[k].empty() || *end != '\0') fail(lineno, "column " + schema.columns[k] + " is not numeric");
    }
  }
  if (!saw_header) fail(lineno, "no header row");
}

}  // namespace tqaoa
