// Copyright 2026 The bilocal-sharing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bilocal/brgp.hpp"
#include "bilocal/correlator_model.hpp"

namespace bilocal {

struct NelderMeadOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;  // on the spread of objective values in the simplex
  double initial_step = 0.05;
  double lower = 0.0;
  double upper = M_PI;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Maximizes `f` inside the box [lower, upper]^d. Trial points are clamped
/// to the box. The returned value is never below f(start).
NelderMeadResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> start,
                                      const NelderMeadOptions& options = {});

enum class OptimizationMode {
  Passive,  // first observers maximize B11, then later observers maximize B22
  MaxMin,   // maximize the smallest B over a chosen set of triples
  Active,   // maximize B22 subject to B11 >= 1
};

const char* to_string(OptimizationMode mode);

struct Objective {
  OptimizationMode mode = OptimizationMode::Passive;
  std::vector<std::pair<int, int>> pairs;  // MaxMin only

  static Objective passive() { return {OptimizationMode::Passive, {}}; }
  static Objective active() { return {OptimizationMode::Active, {}}; }
  static Objective max_min(std::vector<std::pair<int, int>> pairs) {
    return {OptimizationMode::MaxMin, std::move(pairs)};
  }
};

struct OptimizerOptions {
  int grid_points = 64;  // per free angle on [0, pi]
  int max_iterations = 200;
  double tolerance = 1e-10;
  /// Also refine with independent angles per setting (8 free angles),
  /// starting from the symmetric optimum.
  bool full_angles = false;
};

struct OptimizationResult {
  OptimizationMode mode = OptimizationMode::Passive;
  double objective = 0.0;       // re-evaluated with the joint-table pipeline
  double grid_objective = 0.0;  // best coarse-grid value
  ScenarioAngles angles;
  std::optional<double> constraint_slack;  // B11 - 1 in active mode
  BrgpSet brgp;                            // all four triples at `angles`
  int iterations = 0;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Grid search over the symmetric ansatz (one angle per observer, shared by
 * both settings) followed by Nelder-Mead refinement. Pointer specs and
 * visibilities come from `base`; its angles seed nothing.
 *
 * Throws InfeasibleError in active mode when B11 >= 1 cannot be reached.
 */
OptimizationResult optimize_angles(const ScenarioConfig& base, const Objective& objective,
                                   const OptimizerOptions& options = {});

nlohmann::json to_json(const OptimizationResult& result);

}  // namespace bilocal
