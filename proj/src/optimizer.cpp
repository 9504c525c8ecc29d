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

#include "tqaoa/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace tqaoa {
namespace {

class Counted {
 public:
  Counted(const Objective& f, const Projection& p, int budget) : f_(f), p_(p), budget_(budget) {}

  std::vector<double> project(const std::vector<double>& x) const { return p_ ? p_(x) : x; }
  double operator()(const std::vector<double>& x) {
    ++count_;
    return f_(x);
  }
  int count() const { return count_; }
  bool exhausted() const { return count_ >= budget_; }
  bool can_afford(int k) const { return count_ + k <= budget_; }

 private:
  const Objective& f_;
  const Projection& p_;
  int budget_;
  int count_ = 0;
};

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& d) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * d[i];
  return out;
}

}  // namespace

OptimizerResult nelder_mead(const Objective& f, std::vector<double> x0, const OptimizerOptions& opt,
                            const Projection& project) {
  Counted eval(f, project, opt.max_evaluations);
  const std::size_t n = x0.size();
  x0 = eval.project(x0);
  std::vector<std::vector<double>> pts{x0};
  std::vector<double> fv{eval(x0)};
  if (n == 0) return {x0, fv[0], eval.count(), true};
  for (std::size_t i = 0; i < n && !eval.exhausted(); ++i) {
    auto x = x0;
    x[i] += opt.simplex_scale;
    x = eval.project(x);
    if (x == x0) {  // pinned at a bound; step inward instead
      x = x0;
      x[i] -= opt.simplex_scale;
      x = eval.project(x);
    }
    pts.push_back(x);
    fv.push_back(eval(x));
  }

  bool converged = false;
  while (pts.size() == n + 1) {
    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> sp;
    std::vector<double> sf;
    for (auto k : order) {
      sp.push_back(pts[k]);
      sf.push_back(fv[k]);
    }
    pts = std::move(sp);
    fv = std::move(sf);

    if (fv[n] - fv[0] < opt.tolerance) {
      converged = true;
      break;
    }
    if (eval.exhausted()) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[k][i] / static_cast<double>(n);
    std::vector<double> dir(n);
    for (std::size_t i = 0; i < n; ++i) dir[i] = centroid[i] - pts[n][i];

    const auto xr = eval.project(axpy(centroid, 1.0, dir));
    const double fr = eval(xr);
    if (fr < fv[0]) {
      const auto xe = eval.project(axpy(centroid, 2.0, dir));
      const double fe = eval.exhausted() ? fr : eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        fv[n] = fe;
      } else {
        pts[n] = xr;
        fv[n] = fr;
      }
      continue;
    }
    if (fr < fv[n - 1]) {
      pts[n] = xr;
      fv[n] = fr;
      continue;
    }
    if (eval.exhausted()) {
      if (fr < fv[n]) {
        pts[n] = xr;
        fv[n] = fr;
      }
      continue;
    }
    // Outside contraction if the reflection beat the worst, else inside.
    const bool outside = fr < fv[n];
    const auto xc = eval.project(axpy(centroid, outside ? 0.5 : -0.5, dir));
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[n])) {
      pts[n] = xc;
      fv[n] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= n && !eval.exhausted(); ++k) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = pts[0][i] + 0.5 * (pts[k][i] - pts[0][i]);
      pts[k] = eval.project(x);
      fv[k] = eval(pts[k]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  return {pts[best], fv[best], eval.count(), converged};
}

OptimizerResult finite_difference_descent(const Objective& f, std::vector<double> x0, const OptimizerOptions& opt,
                                          const Projection& project) {
  Counted eval(f, project, opt.max_evaluations);
  const auto n = static_cast<Eigen::Index>(x0.size());
  std::vector<double> x = eval.project(x0);
  double fx = eval(x);
  if (n == 0) return {x, fx, eval.count(), true};

  auto gradient = [&](const std::vector<double>& at) {
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto up = at, dn = at;
      up[static_cast<std::size_t>(i)] += opt.fd_step;
      dn[static_cast<std::size_t>(i)] -= opt.fd_step;
      g(i) = (eval(up) - eval(dn)) / (2.0 * opt.fd_step);
    }
    return g;
  };

  const int gradient_cost = 2 * static_cast<int>(n);
  if (!eval.can_afford(gradient_cost)) return {x, fx, eval.count(), false};
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd g = gradient(x);
  bool converged = false;
  while (!eval.exhausted()) {
    if (g.norm() < opt.gradient_floor) {
      converged = true;
      break;
    }
    Eigen::VectorXd d = -h_inv * g;
    if (g.dot(d) >= 0.0) {
      h_inv.setIdentity();
      d = -g;
    }
    // Armijo backtracking on the projected step.
    double step = 1.0;
    std::vector<double> xn;
    double fn = fx;
    bool accepted = false;
    for (int k = 0; k < 40 && !eval.exhausted(); ++k) {
      std::vector<double> trial(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + step * d(static_cast<Eigen::Index>(i));
      trial = eval.project(trial);
      double decrease = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) decrease += g(static_cast<Eigen::Index>(i)) * (trial[i] - x[i]);
      fn = eval(trial);
      if (fn <= fx + 1e-4 * std::min(decrease, 0.0) && fn < fx) {
        xn = std::move(trial);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // A failed search with a curvature-scaled direction gets one retry on
      // the plain gradient before giving up.
      if (!h_inv.isIdentity()) {
        h_inv.setIdentity();
        continue;
      }
      converged = true;
      break;
    }
    const double gain = fx - fn;
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = xn[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
    x = std::move(xn);
    fx = fn;
    if (gain < opt.tolerance) {
      converged = true;
      break;
    }
    if (!eval.can_afford(gradient_cost)) break;
    const Eigen::VectorXd g_new = gradient(x);
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      h_inv = (I - rho * s * y.transpose()) * h_inv * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    g = g_new;
  }
  return {x, fx, eval.count(), converged};
}

}  // namespace tqaoa
