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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tqaoa/experiments.hpp"

namespace tqaoa {
namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("tqaoa_test_" + name); }

RunResult row(MixerKind m, int p, double eta, double r, double popt, const std::string& id = "a") {
  RunResult x;
  x.instance_id = id;
  x.mixer = m;
  x.p = p;
  x.eta = eta;
  x.r_bar = r;
  x.p_opt = popt;
  x.backend = "density";
  return x;
}

TEST(Crossover, ScannerFindsFirstDominatedIndex) {
  const std::vector<double> ref{0.1, 0.2, 0.5, 0.9};
  EXPECT_EQ(find_crossover(ref, {{0.8, 0.6, 0.4, 0.1}, {0.9, 0.3, 0.2, 0.05}}), 2u);
  EXPECT_EQ(find_crossover(ref, {{0.8, 0.6, 0.6, 0.95}}), std::nullopt);
  EXPECT_EQ(find_crossover(ref, {{0.8, 0.2, 0.6, 0.1}}), 1u);  // ties count
  EXPECT_EQ(find_crossover(ref, {}), 0u);
}

TEST(Crossover, ReportIgnoresQampaAndAveragesInstances) {
  const std::vector<double> etas{0.0, 0.002, 0.005, 0.01};
  std::vector<RunResult> rows;
  for (std::size_t k = 0; k < etas.size(); ++k) {
    const double e = etas[k];
    for (const char* id : {"a", "b"}) {
      rows.push_back(row(MixerKind::kStandard, 1, e, 0.30 - 0.01 * k, 0.05, id));
      rows.push_back(row(MixerKind::kXYRing, 1, e, 0.9 - 0.35 * k, 0.30 - 0.1 * k, id));
      rows.push_back(row(MixerKind::kXYFull, 1, e, 0.9 - 0.32 * k, 0.30 - 0.09 * k, id));
      rows.push_back(row(MixerKind::kQAMPA, 1, e, 0.99, 0.9, id));
    }
  }
  const auto rep = crossover_report(rows);
  ASSERT_EQ(rep.size(), 2u);
  EXPECT_EQ(rep[0].metric, "r_bar");
  ASSERT_TRUE(rep[0].eta.has_value());
  EXPECT_EQ(*rep[0].eta, 0.005);
  EXPECT_EQ(rep[1].metric, "p_opt");
  ASSERT_TRUE(rep[1].eta.has_value());
  EXPECT_EQ(*rep[1].eta, 0.01);
  const auto j = to_json(rep);
  EXPECT_EQ(j[0]["p"], 1);
}

TEST(Crossover, NoneWhenStandardNeverWins) {
  std::vector<RunResult> rows;
  for (double e : {0.0, 0.01}) {
    rows.push_back(row(MixerKind::kStandard, 3, e, 0.1, 0.01));
    rows.push_back(row(MixerKind::kXYRing, 3, e, 0.5, 0.2));
  }
  const auto j = to_json(crossover_report(rows));
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["eta"], "none");
}

TEST(Aggregate, MeanAndSampleStd) {
  std::vector<RunResult> rows{row(MixerKind::kXYFull, 2, 0.0, 0.8, 0.2, "a"), row(MixerKind::kXYFull, 2, 0.0, 0.9, 0.4, "b"),
                              row(MixerKind::kStandard, 2, 0.0, 0.5, 0.1, "a")};
  auto bad = row(MixerKind::kXYFull, 2, 0.0, std::nan(""), std::nan(""), "c");
  bad.error = "boom";
  rows.push_back(bad);
  const auto agg = aggregate(rows);
  ASSERT_EQ(agg.size(), 2u);
  const auto& xy = agg[0].mixer == MixerKind::kXYFull ? agg[0] : agg[1];
  EXPECT_EQ(xy.count, 2u);
  EXPECT_NEAR(xy.r_bar_mean, 0.85, 1e-15);
  EXPECT_NEAR(xy.r_bar_std, std::sqrt(0.005), 1e-15);
  EXPECT_NEAR(xy.p_opt_mean, 0.3, 1e-15);
  const auto& st = agg[0].mixer == MixerKind::kStandard ? agg[0] : agg[1];
  EXPECT_EQ(st.r_bar_std, 0.0);
}

TEST(Instances, DeterministicIds) {
  const auto a = random_instances(3, 1, 0.5, 3, 42), b = random_instances(3, 1, 0.5, 3, 42);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(a[k].id, "rand-" + std::to_string(k));
    EXPECT_EQ(a[k].instance.mu, b[k].instance.mu);
  }
  EXPECT_NE(a[0].instance.mu, a[1].instance.mu);
}

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.instances = random_instances(2, 1, 1.0 / 3, 2, 5);
  s.mixers = {MixerKind::kStandard, MixerKind::kXYRing, MixerKind::kQAMPA};
  s.depths = {1, 2};
  s.grid.resolution = 6;
  return s;
}

void expect_same(const std::vector<RunResult>& a, const std::vector<RunResult>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].instance_id, b[k].instance_id);
    EXPECT_EQ(a[k].mixer, b[k].mixer);
    EXPECT_EQ(a[k].p, b[k].p);
    EXPECT_EQ(a[k].r_bar, b[k].r_bar);
    EXPECT_EQ(a[k].p_opt, b[k].p_opt);
    EXPECT_EQ(a[k].seed, b[k].seed);
  }
}

TEST(Sweep, DeterministicAcrossRunsAndWorkers) {
  auto s = small_spec();
  const auto a = run_sweep(s);
  ASSERT_EQ(a.size(), 12u);
  for (const auto& r : a) {
    EXPECT_TRUE(r.ok()) << r.error;
    EXPECT_GE(r.r_bar, 0.0);
    EXPECT_LE(r.r_bar, 1.0 + 1e-12);
    EXPECT_EQ(r.penalty_a != 0.0, r.mixer == MixerKind::kStandard && r.penalty_a != 0.0);
    if (r.mixer != MixerKind::kStandard) EXPECT_EQ(r.penalty_a, 0.0);
  }
  s.workers = 2;
  expect_same(a, run_sweep(s));
}

TEST(Sweep, SampledBackendReproducible) {
  auto s = small_spec();
  s.backend = BackendChoice::kSampled;
  s.shots = 500;
  s.mixers = {MixerKind::kXYFull};
  s.depths = {1};
  const auto a = run_sweep(s);
  expect_same(a, run_sweep(s));
  EXPECT_EQ(a[0].shots, 500u);
  s.master_seed = 6;
  EXPECT_NE(run_sweep(s)[0].seed, a[0].seed);
}

TEST(Sweep, FailedCellBecomesErrorRows) {
  auto s = small_spec();
  s.instances.push_back({"big", random_instance(9, 1, 0.5, 1)});
  s.mixers = {MixerKind::kXYRing};
  s.depths = {1};
  const auto rows = run_sweep(s);
  ASSERT_EQ(rows.size(), 3u);
  int errors = 0;
  for (const auto& r : rows) {
    if (!r.ok()) {
      ++errors;
      EXPECT_EQ(r.instance_id, "big");
      EXPECT_TRUE(std::isnan(r.r_bar));
    }
  }
  EXPECT_EQ(errors, 1);
}

TEST(Sweep, SpecValidation) {
  auto s = small_spec();
  s.depths = {0};
  EXPECT_THROW(run_sweep(s), Error);
  s = small_spec();
  s.etas = {2.0};
  EXPECT_THROW(run_sweep(s), Error);
}

TEST(NoiseSweep, ZeroNoiseMatchesNoiselessSweep) {
  auto s = small_spec();
  s.mixers = {MixerKind::kStandard, MixerKind::kXYFull};
  s.instances.resize(1);
  s.depths = {1};
  s.backend = BackendChoice::kDensity;
  s.shots = 0;
  s.etas = {0.0, 0.05};
  const auto noisy = run_noise_sweep(s);
  ASSERT_EQ(noisy.size(), 4u);
  auto clean = s;
  clean.backend = BackendChoice::kStatevector;
  const auto base = run_sweep(clean);
  for (const auto& r : noisy) {
    const auto& b = base[r.mixer == MixerKind::kStandard ? 0 : 1];
    if (r.eta == 0.0) {
      EXPECT_NEAR(r.r_bar, b.r_bar, 1e-10);
      EXPECT_NEAR(r.p_opt, b.p_opt, 1e-10);
    } else {
      EXPECT_LT(r.p_opt, b.p_opt);
    }
  }
}

TEST(DickeNoise, LimitsAndMonotoneExact) {
  const auto rows = run_dicke_noise(2, 1, {0.0, 0.01, 0.05, 0.1, 1.0}, 4000, 3);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_NEAR(rows[0].p_feasible_exact, 1.0, 1e-12);
  EXPECT_EQ(rows[0].p_feasible, 1.0);
  EXPECT_NEAR(rows[4].p_feasible_exact, 4.0 / 16.0, 1e-12);
  // the approach to K / 4^N need not be monotone at large eta
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) EXPECT_LE(rows[k].p_feasible_exact, rows[k - 1].p_feasible_exact + 1e-12);
  for (const auto& r : rows) {
    EXPECT_EQ(r.shots, 4000u);
    EXPECT_NEAR(r.stderr_binomial, std::sqrt(r.p_feasible * (1 - r.p_feasible) / 4000.0), 1e-15);
    EXPECT_LE(std::abs(r.p_feasible - r.p_feasible_exact),
              5 * std::sqrt(r.p_feasible_exact * (1 - r.p_feasible_exact) / 4000.0) + 1e-12);
  }
}

TEST(CircuitReport, RowsAndInvariants) {
  const auto rows = circuit_report(2, 4, 0.5, 1);
  int uniform = 0, dicke = 0;
  for (const auto& r : rows) {
    EXPECT_EQ(r.budget, r.n_assets / 2);
    if (r.component == "uniform-initial") {
      ++uniform;
      EXPECT_EQ(r.stats.depth, 1);
      EXPECT_EQ(r.stats.cnot_count, 0);
    }
    if (r.component == "dicke-initial") ++dicke;
  }
  EXPECT_EQ(uniform, 3);
  EXPECT_EQ(dicke, 3);
  EXPECT_EQ(rows.size(), 3u * (2 + std::size(kAllMixers)));
}

TEST(LinearFit, ExactLineAndNoise) {
  const auto f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  EXPECT_LT(linear_fit({1, 2, 3, 4}, {1, 3, 1, 3}).r_squared, 0.5);
}

TEST(Csv, RoundTripValidates) {
  const auto path = temp_file("rows.csv");
  {
    std::ofstream os(path);
    write_csv_preamble(os, "tqaoa sweep --test", run_result_schema());
    write_rows(os, run_sweep(small_spec()));
  }
  EXPECT_NO_THROW(validate_csv(path, run_result_schema()));
  {
    std::ifstream is(path);
    std::string first;
    std::getline(is, first);
    EXPECT_EQ(first.rfind("# tqaoa ", 0), 0u);
  }
  fs::remove(path);
}

TEST(Csv, OtherSchemasValidate) {
  const auto p1 = temp_file("dicke.csv"), p2 = temp_file("circ.csv"), p3 = temp_file("agg.csv");
  {
    std::ofstream a(p1), b(p2), c(p3);
    write_csv_preamble(a, "x", dicke_noise_schema());
    write_rows(a, run_dicke_noise(2, 1, {0.0, 0.1}, 100, 1));
    write_csv_preamble(b, "x", circuit_report_schema());
    write_rows(b, circuit_report(2, 3, 0.5, 1));
    write_csv_preamble(c, "x", aggregate_schema());
    write_rows(c, aggregate({row(MixerKind::kXYRing, 1, 0.0, 0.5, 0.1)}));
  }
  EXPECT_NO_THROW(validate_csv(p1, dicke_noise_schema()));
  EXPECT_NO_THROW(validate_csv(p2, circuit_report_schema()));
  EXPECT_NO_THROW(validate_csv(p3, aggregate_schema()));
  for (const auto& p : {p1, p2, p3}) fs::remove(p);
}

TEST(Csv, CorruptFilesRejected) {
  const auto path = temp_file("bad.csv");
  const auto expect_data_error = [&](const std::string& body) {
    {
      std::ofstream os(path);
      os << body;
    }
    try {
      validate_csv(path, dicke_noise_schema());
      ADD_FAILURE() << body;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kData);
    }
  };
  std::ostringstream header;
  write_csv_preamble(header, "x", dicke_noise_schema());
  const std::string h = header.str();
  expect_data_error(h.substr(h.find('\n') + 1) + "0,1,1,0,10,1\n");      // no preamble
  expect_data_error("# tqaoa 0.1.0 x\neta,p\n");                        // wrong header
  expect_data_error(h + "0,1,1,0,10\n");                                // short row
  expect_data_error(h + "0,abc,1,0,10,1\n");                            // not a number
  expect_data_error(h + "0,1,1,0,10,1,7\n");                            // long row
  fs::remove(path);
}

}  // namespace
}  // namespace tqaoa
