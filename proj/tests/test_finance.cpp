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
#include <iomanip>
#include <sstream>

#include "tqaoa/error.hpp"
#include "tqaoa/finance.hpp"
#include "tqaoa/random.hpp"

namespace tqaoa {
namespace {

ReturnMatrix columns(std::vector<std::vector<double>> cols) {
  ReturnMatrix r;
  r.returns.resize(static_cast<Eigen::Index>(cols[0].size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t t = 0; t < cols[j].size(); ++t) {
      r.returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = cols[j][t];
    }
    r.labels.push_back("A" + std::to_string(j));
  }
  return r;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(Returns, SimpleRatios) {
  const auto s = parse_price_csv("date,X\n2024-01-02,100\n2024-01-03,110\n2024-01-04,99\n");
  const auto r = compute_daily_returns(s);
  ASSERT_EQ(r.returns.rows(), 2);
  EXPECT_NEAR(r.returns(0, 0), 0.10, 1e-15);
  EXPECT_NEAR(r.returns(1, 0), -0.10, 1e-15);
}

TEST(Returns, ConstantPricesGiveZero) {
  const auto r = compute_daily_returns(parse_price_csv("date,X\n2024-01-02,50\n2024-01-03,50\n2024-01-04,50\n"));
  EXPECT_EQ(r.returns(0, 0), 0.0);
  EXPECT_EQ(r.returns(1, 0), 0.0);
}

TEST(Returns, MissingDateDroppedFromEverySeries) {
  const auto r = compute_daily_returns(parse_price_csv(
      "date,X,Y\n2024-01-02,100,50\n2024-01-03,101,\n2024-01-04,103,51\n2024-01-05,102,52.5\n"));
  ASSERT_EQ(r.returns.rows(), 2);
  EXPECT_EQ(r.dropped_dates, 1u);
  EXPECT_EQ(r.dates.front().to_string(), "2024-01-04");
  EXPECT_NEAR(r.returns(0, 0), 0.030000000000000027, 1e-15);
  EXPECT_NEAR(r.returns(1, 0), -0.009708737864077666, 1e-15);
  EXPECT_NEAR(r.returns(0, 1), 0.020000000000000018, 1e-15);
  EXPECT_NEAR(r.returns(1, 1), 0.02941176470588225, 1e-15);
}

TEST(Returns, Errors) {
  EXPECT_EQ(code_of([] { compute_daily_returns(parse_price_csv("date,X,Y\n2024-01-02,1,\n2024-01-03,,2\n")); }),
            ErrorCode::kEmptyOverlap);
  EXPECT_EQ(code_of([] { compute_daily_returns(parse_price_csv("date,X\n2024-01-02,1\n2024-01-03,-2\n")); }),
            ErrorCode::kData);
  EXPECT_EQ(code_of([] { parse_price_csv("date,X\n2024-13-02,1\n"); }), ErrorCode::kData);
}

TEST(Mu, ConstantDailyReturn) {
  const double r = 0.0013;
  const auto mu = estimate_mu(columns({std::vector<double>(37, r)}));
  EXPECT_NEAR(mu(0), std::pow(1.0 + r, 252.0) - 1.0, 1e-12);
}

TEST(Mu, ZeroReturns) { EXPECT_EQ(estimate_mu(columns({{0.0, 0.0, 0.0}}))(0), 0.0); }

TEST(Mu, FiveDayFixture) {
  EXPECT_NEAR(estimate_mu(columns({{0.01, -0.02, 0.005, 0.0, 0.01}}))(0), 0.2663629757771029, 1e-12);
}

TEST(Mu, RowOrderInvariant) {
  const auto a = estimate_mu(columns({{0.01, -0.02, 0.005, 0.0, 0.01}, {0.002, 0.001, 0.0, -0.004, 0.03}}));
  const auto b = estimate_mu(columns({{0.0, 0.01, 0.01, -0.02, 0.005}, {-0.004, 0.03, 0.002, 0.001, 0.0}}));
  EXPECT_NEAR((a - b).cwiseAbs().maxCoeff(), 0.0, 1e-14);
}

TEST(Mu, DomainError) { EXPECT_EQ(code_of([] { estimate_mu(columns({{0.1, -1.0}})); }), ErrorCode::kDomain); }

TEST(Mu, GeometricGrowthSeriesEndToEnd) {
  const double g = 0.0007;
  std::ostringstream csv;
  csv << "date,X\n";
  double p = 80.0;
  for (int d = 1; d <= 28; ++d) {
    csv << "2024-02-" << (d < 10 ? "0" : "") << d << ',' << std::setprecision(17) << p << '\n';
    p *= 1.0 + g;
  }
  const auto mu = estimate_mu(compute_daily_returns(parse_price_csv(csv.str())));
  EXPECT_NEAR(mu(0), std::pow(1.0 + g, 252.0) - 1.0, 1e-10);
}

TEST(Sigma, TwoAssetFourDayFixture) {
  const auto s = estimate_sigma(columns({{0.01, -0.005, 0.02, 0.0}, {0.003, 0.001, -0.004, 0.006}}));
  EXPECT_NEAR(s(0, 0), 0.030975, 1e-12);
  EXPECT_NEAR(s(0, 1), -0.00777, 1e-12);
  EXPECT_NEAR(s(1, 1), 0.004452, 1e-12);
  EXPECT_EQ(s(0, 1), s(1, 0));
}

TEST(Sigma, IdenticalColumnsAndConstantColumn) {
  const auto s = estimate_sigma(columns({{0.01, 0.03, -0.02}, {0.01, 0.03, -0.02}, {0.004, 0.004, 0.004}}));
  EXPECT_DOUBLE_EQ(s(0, 0), s(0, 1));
  EXPECT_DOUBLE_EQ(s(1, 1), s(0, 1));
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(s(2, k), 0.0);
    EXPECT_EQ(s(k, 2), 0.0);
  }
}

TEST(Sigma, NeedsTwoRows) {
  EXPECT_EQ(code_of([] { estimate_sigma(columns({{0.01}})); }), ErrorCode::kInsufficientData);
}

TEST(RandomInstance, DeterministicAndValid) {
  const auto a = random_instance(5, 2, 1.0 / 3, 7);
  const auto b = random_instance(5, 2, 1.0 / 3, 7);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.sigma, b.sigma);
  EXPECT_NO_THROW(a.validate());
  for (int i = 0; i < 5; ++i) {
    EXPECT_GE(a.sigma(i, i), 0.01);
    EXPECT_LE(a.sigma(i, i), 0.2);
    EXPECT_GE(a.mu(i), -0.1);
    EXPECT_LE(a.mu(i), 0.4);
  }
  EXPECT_FALSE(random_instance(5, 2, 1.0 / 3, 8).mu == a.mu);
  EXPECT_EQ(a.provenance.at("rng"), kRngAlgorithm);
}

TEST(RandomInstance, SmallestEigenvalueByPowerIteration) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = random_instance(6, 1, 0.5, seed);
    // Power iteration on (c I - sigma) finds c - lambda_min.
    const double c = inst.sigma.cwiseAbs().rowwise().sum().maxCoeff();
    const Eigen::MatrixXd m = c * Eigen::MatrixXd::Identity(6, 6) - inst.sigma;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(6).normalized();
    double lam = 0;
    for (int it = 0; it < 5000; ++it) {
      const Eigen::VectorXd w = m * v;
      lam = v.dot(w);
      v = w.normalized();
    }
    EXPECT_GE(c - lam, -1e-10) << seed;
  }
}

TEST(RandomInstance, RejectsBudget) {
  EXPECT_EQ(code_of([] { random_instance(3, 4, 0.5, 1); }), ErrorCode::kParameter);
}

TEST(Instance, ValidationCatchesAsymmetryAndIndefiniteness) {
  auto inst = random_instance(3, 1, 0.5, 2);
  inst.sigma(0, 1) += 1e-9;
  EXPECT_EQ(code_of([&] { inst.validate(); }), ErrorCode::kData);
  inst = random_instance(3, 1, 0.5, 2);
  inst.sigma(0, 0) = -1.0;
  EXPECT_EQ(code_of([&] { inst.validate(); }), ErrorCode::kData);
}

TEST(Instance, JsonRoundTrip) {
  const auto inst = random_instance(4, -1, 0.25, 3);
  const auto path = std::filesystem::temp_directory_path() / "tqaoa_instance_roundtrip.json";
  save_instance(inst, path);
  const auto back = load_instance(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.n_assets, 4);
  EXPECT_EQ(back.budget, -1);
  EXPECT_EQ(back.q, 0.25);
  EXPECT_EQ(back.mu, inst.mu);
  EXPECT_EQ(back.sigma, inst.sigma);
  EXPECT_EQ(back.labels, inst.labels);
  const auto j = to_json(inst);
  for (const char* key : {"n_assets", "budget", "q", "mu", "sigma", "labels", "provenance"}) EXPECT_TRUE(j.contains(key));
}

TEST(Instance, FromPriceCsv) {
  const auto r = compute_daily_returns(
      parse_price_csv("date,X,Y\n2024-01-02,10,20\n2024-01-03,10.5,19\n2024-01-04,10.2,19.5\n2024-01-05,10.4,20\n"));
  const auto inst = make_instance(r, 1.0 / 3, 1);
  EXPECT_EQ(inst.n_assets, 2);
  EXPECT_EQ(inst.labels, (std::vector<std::string>{"X", "Y"}));
  EXPECT_NO_THROW(inst.validate());
}

}  // namespace
}  // namespace tqaoa
