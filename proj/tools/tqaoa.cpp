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

// tqaoa command-line front end. Every subcommand writes plot-ready CSV or
// JSON; CSV files start with a comment line carrying the version and the
// full command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tqaoa/experiments.hpp"
#include "tqaoa/version.hpp"

namespace fs = std::filesystem;
using namespace tqaoa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

std::string g_invocation;

// "1,3,5" or "1-5" or a mix of both.
std::vector<int> parse_depths(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const auto dash = tok.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoi(tok));
      } else {
        const int lo = std::stoi(tok.substr(0, dash)), hi = std::stoi(tok.substr(dash + 1));
        for (int p = lo; p <= hi; ++p) out.push_back(p);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParameter, "cannot parse depth list '" + text + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kParameter, "empty depth list");
  return out;
}

std::vector<MixerKind> parse_mixers(const std::vector<std::string>& names) {
  std::vector<MixerKind> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.assign(std::begin(kAllMixers), std::end(kAllMixers));
      continue;
    }
    out.push_back(mixer_from_string(n));
  }
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

template <typename Rows>
void write_csv(const fs::path& path, const CsvSchema& schema, const Rows& rows) {
  {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    write_csv_preamble(os, g_invocation, schema);
    write_rows(os, rows);
  }
  validate_csv(path, schema);
  std::cerr << "wrote " << path.string() << '\n';
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) ensure_dir(path.parent_path());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  ensure_parent(path);
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  os << j.dump(2) << '\n';
  std::cerr << "wrote " << path.string() << '\n';
}

// Options shared by sweep and noise-sweep.
struct SweepOptions {
  std::vector<std::string> instance_paths;
  std::vector<std::uint64_t> seeds;
  int n_assets = 5;
  int budget = 2;
  double q = 1.0 / 3.0;
  int count = 5;
  std::vector<std::string> mixers{"all"};
  std::string depths = "1-5";
  std::string backend = "statevector";
  std::uint64_t shots = 8192;
  std::vector<double> etas{0.0};
  std::uint64_t master_seed = 0;
  int workers = 1;
  int grid_resolution = 40;
  int refine = 0;
  bool first_start_only = false;
  std::string out = "out";
};

void add_sweep_options(CLI::App* cmd, SweepOptions& o, bool noisy) {
  cmd->add_option("--instance", o.instance_paths, "Instance JSON file(s)");
  cmd->add_option("--seed", o.seeds, "Seeds of synthetic instances (one instance per seed)")->delimiter(',');
  cmd->add_option("--n-assets", o.n_assets, "Assets per synthetic instance")->capture_default_str();
  cmd->add_option("--budget", o.budget, "Budget B of synthetic instances")->capture_default_str();
  cmd->add_option("--q", o.q, "Risk weight q of synthetic instances")->capture_default_str();
  cmd->add_option("--count", o.count, "Synthetic instances when no --instance/--seed is given")->capture_default_str();
  cmd->add_option("--mixers", o.mixers, "Mixers or 'all'")->delimiter(',')->capture_default_str();
  cmd->add_option("--depths", o.depths, "Depths, e.g. 1,3 or 1-5")->capture_default_str();
  cmd->add_option("--shots", o.shots, "Shots for sampled metrics")->capture_default_str();
  cmd->add_option("--master-seed", o.master_seed, "Master seed")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str();
  cmd->add_option("--grid", o.grid_resolution, "Points per axis of the p=1 ramp grid")->capture_default_str();
  cmd->add_flag("--first-start-only", o.first_start_only,
                "Optimize only the transfer candidate with the lowest starting objective");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  if (noisy) {
    o.etas = {0.0, 0.002, 0.005, 0.01};
    o.depths = "1,3";
    cmd->add_option("--eta", o.etas, "Depolarizing strengths")->delimiter(',')->capture_default_str();
    cmd->add_option("--refine", o.refine, "Noisy simplex evaluations per layer (0 = none)")->capture_default_str();
  } else {
    cmd->add_option("--backend", o.backend, "statevector or sampled")
        ->check(CLI::IsMember({"statevector", "sampled"}))
        ->capture_default_str();
  }
}

ExperimentSpec make_spec(const SweepOptions& o, bool noisy) {
  ExperimentSpec s;
  if (!o.instance_paths.empty()) {
    for (const auto& p : o.instance_paths) s.instances.push_back({fs::path(p).stem().string(), load_instance(p)});
  } else if (!o.seeds.empty()) {
    for (auto seed : o.seeds)
      s.instances.push_back({"seed-" + std::to_string(seed), random_instance(o.n_assets, o.budget, o.q, seed)});
  } else {
    s.instances = random_instances(o.n_assets, o.budget, o.q, o.count, o.master_seed);
  }
  s.mixers = parse_mixers(o.mixers);
  s.depths = parse_depths(o.depths);
  s.backend = noisy ? BackendChoice::kDensity : backend_from_string(o.backend);
  s.shots = o.shots;
  s.etas = noisy ? o.etas : std::vector<double>{0.0};
  s.master_seed = o.master_seed;
  s.workers = o.workers;
  s.grid.resolution = o.grid_resolution;
  s.refine_evaluations = o.refine;
  s.optimize_all_starts = !o.first_start_only;
  s.validate();
  return s;
}

int report_rows(const std::vector<RunResult>& rows) {
  int failed = 0;
  for (const auto& r : rows) {
    if (r.ok()) continue;
    ++failed;
    std::cerr << "row failed: " << r.instance_id << ' ' << to_string(r.mixer) << " p=" << r.p << ": " << r.error
              << '\n';
  }
  return failed == 0 ? kExitOk : kExitPartial;
}

int cmd_sweep(const SweepOptions& o) {
  const auto spec = make_spec(o, false);
  ensure_dir(o.out);
  const auto rows = run_sweep(spec);
  write_csv(fs::path(o.out) / "sweep.csv", run_result_schema(), rows);
  write_csv(fs::path(o.out) / "sweep_aggregate.csv", aggregate_schema(), aggregate(rows));
  return report_rows(rows);
}

int cmd_noise_sweep(const SweepOptions& o) {
  const auto spec = make_spec(o, true);
  ensure_dir(o.out);
  const auto rows = run_noise_sweep(spec);
  write_csv(fs::path(o.out) / "noise_sweep.csv", run_result_schema(), rows);
  write_csv(fs::path(o.out) / "noise_aggregate.csv", aggregate_schema(), aggregate(rows));
  const auto cross = to_json(crossover_report(rows));
  write_json(fs::path(o.out) / "crossover.json", cross);
  std::cout << cross.dump() << '\n';
  return report_rows(rows);
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) g_invocation += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"QAOA for ternary portfolio optimization"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // estimate
  std::string prices_path, estimate_out = "instance.json";
  double estimate_q = 1.0 / 3.0;
  int estimate_budget = 0;
  auto* estimate = app.add_subcommand("estimate", "Estimate mu and sigma from a price CSV and write an instance");
  estimate->add_option("prices", prices_path, "CSV with a date column and one price column per asset")->required();
  estimate->add_option("--q", estimate_q, "Risk weight q")->capture_default_str();
  estimate->add_option("--budget", estimate_budget, "Net position budget B")->required();
  estimate->add_option("--out", estimate_out, "Instance JSON path")->capture_default_str();

  // brute-force
  std::string bf_instance, bf_out;
  auto* brute = app.add_subcommand("brute-force", "Enumerate the feasible set of an instance");
  brute->add_option("--instance", bf_instance, "Instance JSON")->required();
  brute->add_option("--out", bf_out, "Summary JSON path (stdout if omitted)");

  SweepOptions sweep_opts, noise_opts;
  auto* sweep = app.add_subcommand("sweep", "Noiseless or sampled depth sweep per mixer");
  add_sweep_options(sweep, sweep_opts, false);
  auto* noise = app.add_subcommand("noise-sweep", "Density-matrix sweep over depolarizing strengths");
  add_sweep_options(noise, noise_opts, true);

  // dicke-noise
  int dn_n = 5, dn_b = 2;
  std::vector<double> dn_etas{0.0, 0.001, 0.002, 0.003, 0.004, 0.005, 0.006, 0.007, 0.008, 0.009, 0.01};
  std::uint64_t dn_shots = 20000, dn_seed = 0;
  std::string dn_out = "out";
  auto* dicke = app.add_subcommand("dicke-noise", "Feasible-state probability of the noisy Dicke preparation");
  dicke->add_option("--n-assets", dn_n)->capture_default_str();
  dicke->add_option("--budget", dn_b)->capture_default_str();
  dicke->add_option("--eta", dn_etas, "Depolarizing strengths")->delimiter(',')->capture_default_str();
  dicke->add_option("--shots", dn_shots)->capture_default_str();
  dicke->add_option("--master-seed", dn_seed)->capture_default_str();
  dicke->add_option("--out", dn_out, "Output directory")->capture_default_str();

  // circuit-report
  int cr_min = 2, cr_max = 8;
  double cr_q = 1.0 / 3.0;
  std::uint64_t cr_seed = 0;
  std::string cr_out = "out";
  auto* circ = app.add_subcommand("circuit-report", "Gate, CNOT and depth counts per component; B = floor(N/2)");
  circ->add_option("--n-min", cr_min)->capture_default_str();
  circ->add_option("--n-max", cr_max)->capture_default_str();
  circ->add_option("--q", cr_q)->capture_default_str();
  circ->add_option("--master-seed", cr_seed)->capture_default_str();
  circ->add_option("--out", cr_out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) {
      const auto series = read_price_csv(prices_path);
      const auto returns = compute_daily_returns(series);
      if (returns.dropped_dates > 0) {
        std::cerr << "dropped " << returns.dropped_dates << " date(s) missing in at least one series\n";
      }
      const auto inst = make_instance(returns, estimate_q, estimate_budget);
      ensure_parent(estimate_out);
      save_instance(inst, estimate_out);
      std::cerr << "wrote " << estimate_out << '\n';
      return kExitOk;
    }
    if (*brute) {
      const auto inst = load_instance(bf_instance);
      auto j = enumerate_feasible(inst).to_json();
      j["penalty_a"] = estimate_penalty_coefficient(inst).coefficient_a;
      if (bf_out.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        write_json(bf_out, j);
      }
      return kExitOk;
    }
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*noise) return cmd_noise_sweep(noise_opts);
    if (*dicke) {
      ensure_dir(dn_out);
      write_csv(fs::path(dn_out) / "dicke_noise.csv", dicke_noise_schema(),
                run_dicke_noise(dn_n, dn_b, dn_etas, dn_shots, dn_seed));
      return kExitOk;
    }
    if (*circ) {
      ensure_dir(cr_out);
      write_csv(fs::path(cr_out) / "circuit_report.csv", circuit_report_schema(),
                circuit_report(cr_min, cr_max, cr_q, cr_seed));
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitFatal;
}
