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

#include "tqaoa/finance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tqaoa/error.hpp"
#include "tqaoa/random.hpp"

namespace tqaoa {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

int parse_int(std::string_view s, std::string_view what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kData, "cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return value;
}

double parse_double(std::string_view s) {
  // std::from_chars for double is unavailable on some toolchains we target.
  std::string copy(s);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size() || copy.empty()) {
    throw Error(ErrorCode::kData, "cannot parse price '" + copy + "'");
  }
  return value;
}

Eigen::VectorXd json_vector(const nlohmann::json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

}  // namespace

Date Date::parse(std::string_view iso) {
  iso = trim(iso);
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw Error(ErrorCode::kData, "expected ISO-8601 date, got '" + std::string(iso) + "'");
  }
  Date d{parse_int(iso.substr(0, 4), "year"), parse_int(iso.substr(5, 2), "month"),
         parse_int(iso.substr(8, 2), "day")};
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
    throw Error(ErrorCode::kData, "date out of range: '" + std::string(iso) + "'");
  }
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

void PriceSeries::validate() const {
  if (dates.size() != prices.size()) {
    throw Error(ErrorCode::kShape, "series '" + label + "' has mismatched date/price lengths");
  }
  if (prices.size() < 2) throw Error(ErrorCode::kData, "series '" + label + "' has fewer than 2 prices");
  for (std::size_t t = 0; t < prices.size(); ++t) {
    if (!(prices[t] > 0.0) || !std::isfinite(prices[t])) {
      throw Error(ErrorCode::kData, "series '" + label + "' has non-positive price on " + dates[t].to_string());
    }
    if (t > 0 && !(dates[t - 1] < dates[t])) {
      throw Error(ErrorCode::kData, "series '" + label + "' dates are not strictly increasing");
    }
  }
}

void PortfolioInstance::validate() const {
  if (n_assets <= 0) throw Error(ErrorCode::kParameter, "n_assets must be positive");
  if (std::abs(budget) > n_assets) throw Error(ErrorCode::kParameter, "|budget| exceeds n_assets");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::kParameter, "risk aversion q must lie in [0, 1]");
  if (mu.size() != n_assets || sigma.rows() != n_assets || sigma.cols() != n_assets) {
    throw Error(ErrorCode::kShape, "mu/sigma dimensions do not match n_assets");
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != n_assets) {
    throw Error(ErrorCode::kShape, "label count does not match n_assets");
  }
  if (!mu.allFinite() || !sigma.allFinite()) throw Error(ErrorCode::kData, "non-finite mu or sigma");
  for (int i = 0; i < n_assets; ++i) {
    for (int j = i + 1; j < n_assets; ++j) {
      if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-12) {
        throw Error(ErrorCode::kData, "sigma is not symmetric");
      }
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw Error(ErrorCode::kData, "sigma is not positive semidefinite");
  }
}

std::vector<PriceSeries> parse_price_csv(std::string_view text) {
  std::vector<PriceSeries> series;
  std::size_t pos = 0;
  bool have_header = false;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line, ',');
    if (!have_header) {
      if (cells.size() < 2 || cells[0] != "date") {
        throw Error(ErrorCode::kData, "price CSV header must be 'date,<label>,...'");
      }
      for (std::size_t c = 1; c < cells.size(); ++c) series.push_back(PriceSeries{std::string(cells[c]), {}, {}});
      have_header = true;
      continue;
    }
    if (cells.size() != series.size() + 1) {
      throw Error(ErrorCode::kData, "row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                        " cells, expected " + std::to_string(series.size() + 1));
    }
    const Date date = Date::parse(cells[0]);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) continue;
      series[c - 1].dates.push_back(date);
      series[c - 1].prices.push_back(parse_double(cells[c]));
    }
  }
  if (!have_header) throw Error(ErrorCode::kData, "price CSV is empty");
  return series;
}

std::vector<PriceSeries> read_price_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_price_csv(buffer.str());
}

ReturnMatrix compute_daily_returns(const std::vector<PriceSeries>& series_set) {
  if (series_set.empty()) throw Error(ErrorCode::kShape, "no price series given");

  std::set<Date> all_dates;
  std::map<Date, int> seen;
  for (const auto& s : series_set) {
    if (s.dates.size() != s.prices.size()) throw Error(ErrorCode::kShape, "series '" + s.label + "' is ragged");
    for (std::size_t t = 0; t < s.prices.size(); ++t) {
      if (!(s.prices[t] > 0.0) || !std::isfinite(s.prices[t])) {
        throw Error(ErrorCode::kData, "series '" + s.label + "' has non-positive price on " + s.dates[t].to_string());
      }
      if (t > 0 && !(s.dates[t - 1] < s.dates[t])) {
        throw Error(ErrorCode::kData, "series '" + s.label + "' dates are not strictly increasing");
      }
      all_dates.insert(s.dates[t]);
      ++seen[s.dates[t]];
    }
  }
  std::vector<Date> common;
  for (const auto& [date, count] : seen) {
    if (count == static_cast<int>(series_set.size())) common.push_back(date);
  }
  if (common.size() < 2) throw Error(ErrorCode::kEmptyOverlap, "fewer than 2 dates common to all series");

  const auto n = static_cast<Eigen::Index>(series_set.size());
  const auto rows = static_cast<Eigen::Index>(common.size()) - 1;
  ReturnMatrix out;
  out.returns.resize(rows, n);
  out.dropped_dates = all_dates.size() - common.size();
  out.dates.assign(common.begin() + 1, common.end());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = series_set[static_cast<std::size_t>(i)];
    out.labels.push_back(s.label);
    std::vector<double> aligned;
    aligned.reserve(common.size());
    std::size_t k = 0;
    for (const Date& d : common) {
      while (s.dates[k] < d) ++k;
      aligned.push_back(s.prices[k]);
    }
    for (Eigen::Index t = 0; t < rows; ++t) {
      out.returns(t, i) = aligned[static_cast<std::size_t>(t) + 1] / aligned[static_cast<std::size_t>(t)] - 1.0;
    }
  }
  return out;
}

Eigen::VectorXd estimate_mu(const ReturnMatrix& returns) {
  const Eigen::Index rows = returns.returns.rows();
  if (rows < 1) throw Error(ErrorCode::kInsufficientData, "estimate_mu needs at least one return");
  Eigen::VectorXd mu(returns.returns.cols());
  for (Eigen::Index i = 0; i < returns.returns.cols(); ++i) {
    // Sum of log growth factors; the product itself can under/overflow for
    // multi-year windows.
    double log_growth = 0.0;
    for (Eigen::Index t = 0; t < rows; ++t) {
      const double r = returns.returns(t, i);
      if (!(r > -1.0)) throw Error(ErrorCode::kDomain, "daily return <= -1");
      log_growth += std::log1p(r);
    }
    mu(i) = std::expm1(log_growth * kTradingDaysPerYear / static_cast<double>(rows));
  }
  return mu;
}

Eigen::MatrixXd estimate_sigma(const ReturnMatrix& returns) {
  const Eigen::Index rows = returns.returns.rows();
  const Eigen::Index n = returns.returns.cols();
  if (rows < 2) throw Error(ErrorCode::kInsufficientData, "estimate_sigma needs at least two returns");
  const Eigen::RowVectorXd mean = returns.returns.colwise().mean();
  const Eigen::MatrixXd centered = returns.returns.rowwise() - mean;
  Eigen::MatrixXd sigma(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double cov = centered.col(i).dot(centered.col(j)) / static_cast<double>(rows - 1);
      sigma(i, j) = sigma(j, i) = kTradingDaysPerYear * cov;
    }
  }
  return sigma;
}

PortfolioInstance make_instance(const ReturnMatrix& returns, double q, int budget) {
  PortfolioInstance instance;
  instance.n_assets = static_cast<int>(returns.returns.cols());
  instance.budget = budget;
  instance.q = q;
  instance.mu = estimate_mu(returns);
  instance.sigma = estimate_sigma(returns);
  instance.labels = returns.labels;
  instance.provenance = {
      {"source", "prices"},
      {"first_date", returns.dates.empty() ? "" : returns.dates.front().to_string()},
      {"last_date", returns.dates.empty() ? "" : returns.dates.back().to_string()},
      {"n_returns", returns.returns.rows()},
      {"dropped_dates", returns.dropped_dates},
  };
  instance.validate();
  return instance;
}

PortfolioInstance random_instance(int n_assets, int budget, double q, std::uint64_t seed) {
  if (n_assets <= 0) throw Error(ErrorCode::kParameter, "n_assets must be positive");
  if (std::abs(budget) > n_assets) throw Error(ErrorCode::kParameter, "|budget| exceeds n_assets");
  Rng rng(seed);
  const int n = n_assets;
  const int factors = n + 2;
  Eigen::MatrixXd g(n, factors);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < factors; ++k) g(i, k) = rng.normal();
  }
  const Eigen::MatrixXd gram = g * g.transpose();
  Eigen::VectorXd variance(n);
  for (int i = 0; i < n; ++i) variance(i) = rng.uniform(0.01, 0.2);

  PortfolioInstance instance;
  instance.n_assets = n;
  instance.budget = budget;
  instance.q = q;
  instance.sigma.resize(n, n);
  for (int i = 0; i < n; ++i) {
    instance.sigma(i, i) = variance(i);
    for (int j = i + 1; j < n; ++j) {
      const double corr = gram(i, j) / std::sqrt(gram(i, i) * gram(j, j));
      instance.sigma(i, j) = instance.sigma(j, i) = corr * std::sqrt(variance(i) * variance(j));
    }
  }
  instance.mu.resize(n);
  for (int i = 0; i < n; ++i) instance.mu(i) = rng.uniform(-0.1, 0.4);
  for (int i = 0; i < n; ++i) instance.labels.push_back("A" + std::to_string(i + 1));
  instance.provenance = {{"source", "random"}, {"seed", seed}, {"rng", kRngAlgorithm}};
  instance.validate();
  return instance;
}

nlohmann::json to_json(const PortfolioInstance& instance) {
  nlohmann::json sigma = nlohmann::json::array();
  for (int i = 0; i < instance.n_assets; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < instance.n_assets; ++j) row.push_back(instance.sigma(i, j));
    sigma.push_back(std::move(row));
  }
  nlohmann::json mu = nlohmann::json::array();
  for (int i = 0; i < instance.n_assets; ++i) mu.push_back(instance.mu(i));
  return {{"n_assets", instance.n_assets}, {"budget", instance.budget}, {"q", instance.q},
          {"mu", mu},  {"sigma", sigma}, {"labels", instance.labels},
          {"provenance", instance.provenance}};
}

PortfolioInstance instance_from_json(const nlohmann::json& j) {
  PortfolioInstance instance;
  try {
    instance.n_assets = j.at("n_assets").get<int>();
    instance.budget = j.at("budget").get<int>();
    instance.q = j.at("q").get<double>();
    instance.mu = json_vector(j.at("mu"));
    const auto& rows = j.at("sigma");
    instance.sigma.resize(static_cast<Eigen::Index>(rows.size()), instance.n_assets);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != static_cast<std::size_t>(instance.n_assets)) {
        throw Error(ErrorCode::kShape, "sigma row length does not match n_assets");
      }
      for (int c = 0; c < instance.n_assets; ++c) {
        instance.sigma(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)].get<double>();
      }
    }
    if (j.contains("labels")) instance.labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("provenance")) instance.provenance = j.at("provenance");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kData, std::string("malformed instance JSON: ") + e.what());
  }
  instance.validate();
  return instance;
}

PortfolioInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kData, path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const PortfolioInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << to_json(instance).dump(2) << '\n';
}

}  // namespace tqaoa
