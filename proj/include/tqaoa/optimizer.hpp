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

#include <functional>
#include <vector>

namespace tqaoa {

using Objective = std::function<double(const std::vector<double>&)>;
/// Maps an arbitrary point onto the feasible parameter domain.
using Projection = std::function<std::vector<double>(const std::vector<double>&)>;

struct OptimizerOptions {
  double tolerance = 1e-8;      // objective spread (simplex) or per-step gain (gradient)
  int max_evaluations = 500;
  double simplex_scale = 0.1;   // initial simplex edge
  double fd_step = 1e-6;        // central-difference step
  double gradient_floor = 1e-10;
};

struct OptimizerResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead with reflection 1, expansion 2, contraction 0.5, shrink 0.5.
/// Every trial point is projected before evaluation.
OptimizerResult nelder_mead(const Objective& f, std::vector<double> x0, const OptimizerOptions& opt,
                            const Projection& project = {});

/// Quasi-Newton descent on central-difference gradients with an Armijo
/// backtracking line search along the projected path.
OptimizerResult finite_difference_descent(const Objective& f, std::vector<double> x0, const OptimizerOptions& opt,
                                          const Projection& project = {});

}  // namespace tqaoa
