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

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace tqaoa {

/// Calendar date parsed from ISO-8601 `YYYY-MM-DD`.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  static Date parse(std::string_view iso);
  std::string to_string() const;
  auto operator<=>(const Date&) const = default;
};

/// Adjusted closing prices of one asset, one entry per trading date.
struct PriceSeries {
  std::string label;
  std::vector<Date> dates;
  std::vector<double> prices;

  /// Throws kData unless prices are positive, dates strictly increase and
  /// there are at least two observations.
  void validate() const;
};

/// Daily simple returns, T rows (dates) by N columns (assets).
struct ReturnMatrix {
  Eigen::MatrixXd returns;
  std::vector<std::string> labels;
  std::vector<Date> dates;       // date at the end of each return period
  std::size_t dropped_dates = 0; // dates removed by the intersection policy
};

/// Mean-variance problem data. mu and sigma are annualized.
struct PortfolioInstance {
  int n_assets = 0;
  int budget = 0;
  double q = 0.0;  // risk aversion in [0, 1]
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  std::vector<std::string> labels;
  nlohmann::json provenance = nlohmann::json::object();

  void validate() const;
};

inline constexpr double kTradingDaysPerYear = 252.0;

/// Reads `date,<label1>,<label2>,...` with one row per trading day. Empty
/// cells mark missing prices; the affected asset simply has no observation
/// on that date.
std::vector<PriceSeries> read_price_csv(const std::filesystem::path& path);
std::vector<PriceSeries> parse_price_csv(std::string_view text);

/// Aligns the series on the intersection of their date sets and differences
/// consecutive prices: r[t][i] = p[t+1][i] / p[t][i] - 1.
ReturnMatrix compute_daily_returns(const std::vector<PriceSeries>& series_set);

/// Geometric annualization: [prod_t (1 + r_t)]^(252/T) - 1.
Eigen::VectorXd estimate_mu(const ReturnMatrix& returns);

/// Unbiased sample covariance of daily returns, times 252. Exactly symmetric.
Eigen::MatrixXd estimate_sigma(const ReturnMatrix& returns);

PortfolioInstance make_instance(const ReturnMatrix& returns, double q, int budget);

/// Synthetic instance: sigma = D^(1/2) C D^(1/2) where C is the correlation
/// matrix of G G^T for a Gaussian G, diagonal D uniform in [0.01, 0.2];
/// mu uniform in [-0.1, 0.4]. Deterministic per seed.
PortfolioInstance random_instance(int n_assets, int budget, double q, std::uint64_t seed);

nlohmann::json to_json(const PortfolioInstance& instance);
PortfolioInstance instance_from_json(const nlohmann::json& j);

PortfolioInstance load_instance(const std::filesystem::path& path);
void save_instance(const PortfolioInstance& instance, const std::filesystem::path& path);

}  // namespace tqaoa
