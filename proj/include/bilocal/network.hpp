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

#include <array>
#include <iosfwd>

#include "json.hpp"

#include "bilocal/measurement.hpp"

namespace bilocal {

/// The two measurement angles of one observer, for setting 0 and setting 1.
struct ObserverAngles {
  double setting0 = 0.0;
  double setting1 = 0.0;

  double operator[](int setting) const { return setting == 0 ? setting0 : setting1; }
  static ObserverAngles both(double angle) { return {angle, angle}; }
};

/// Angles of all four sequential observers. Index 0 is the first observer
/// on a wing (unsharp), index 1 the second (projective).
struct ScenarioAngles {
  std::array<ObserverAngles, 2> alice;
  std::array<ObserverAngles, 2> charlie;

  static ScenarioAngles uniform(double angle);
  /// Symmetric ansatz: both settings share an angle per observer.
  static ScenarioAngles symmetric(double alice1, double alice2, double charlie1,
                                  double charlie2);
  std::array<double, 8> flat() const;
  static ScenarioAngles from_flat(const std::array<double, 8>& values);
};

struct ScenarioConfig {
  double v1 = 1.0;  // visibility of the Alice-Bob source
  double v2 = 1.0;  // visibility of the Bob-Charlie source
  PointerSpec alice1;
  PointerSpec charlie1;
  ScenarioAngles angles;

  /// Throws std::invalid_argument for out-of-range values.
  void validate() const;
};

/// Setting bits (i1, i2, j1, j2) of the four sequential observers.
struct SettingContext {
  int i1 = 0, i2 = 0, j1 = 0, j2 = 0;
};

/// Outcome bits of one run.
struct RunOutcome {
  int a1 = 0, a2 = 0, b0 = 0, b1 = 0, c1 = 0, c2 = 0;
};

/**
 * P(a1, a2, b0, b1, c1, c2 | i1, i2, j1, j2) for all 16 setting contexts and
 * 64 outcomes.
 */
class JointTable {
 public:
  static constexpr int kContexts = 16;
  static constexpr int kOutcomes = 64;

  static int context_index(const SettingContext& s);
  static SettingContext context_at(int index);
  static int outcome_index(const RunOutcome& o);
  static RunOutcome outcome_at(int index);

  double operator()(const SettingContext& s, const RunOutcome& o) const {
    return probs_[context_index(s) * kOutcomes + outcome_index(o)];
  }
  double& at(int context, int outcome) { return probs_[context * kOutcomes + outcome]; }
  double at(int context, int outcome) const { return probs_[context * kOutcomes + outcome]; }

  double context_total(int context) const;
  double max_abs_diff(const JointTable& other) const;

 private:
  std::array<double, kContexts * kOutcomes> probs_{};
};

/**
 * P(a_n, b0, b1, c_m | x, z) for one Alice_n - Bob - Charlie_m triple, with x
 * the setting bit of Alice_n and z that of Charlie_m.
 */
class TripartiteDistribution {
 public:
  TripartiteDistribution(int n, int m);

  int alice_index() const { return n_; }
  int charlie_index() const { return m_; }

  double operator()(int x, int z, int a, int b0, int b1, int c) const {
    return probs_[index(x, z, a, b0, b1, c)];
  }
  double& at(int x, int z, int a, int b0, int b1, int c) {
    return probs_[index(x, z, a, b0, b1, c)];
  }
  double context_total(int x, int z) const;

 private:
  static int index(int x, int z, int a, int b0, int b1, int c) {
    return ((((x * 2 + z) * 2 + a) * 2 + b0) * 2 + b1) * 2 + c;
  }
  int n_;
  int m_;
  std::array<double, 64> probs_{};
};

/// werner(v1) (x) werner(v2), qubit order A, B1, B2, C.
DensityOperator build_initial(const ScenarioConfig& config);

/// Cross-wing order in which the wing instruments are applied after Bob.
enum class MeasurementOrder { AliceFirst, CharlieFirst };

/**
 * Exact joint table: Bell-state measurement and reduction to Alice-Charlie,
 * then Alice_1 (unsharp), Alice_2 (projective), Charlie_1 (unsharp),
 * Charlie_2 (projective). Each probability is the trace of the final
 * unnormalized state.
 */
JointTable joint_table(const ScenarioConfig& config,
                       MeasurementOrder order = MeasurementOrder::AliceFirst);

/// Same table computed on the full 4-qubit register, with Bob's projection
/// applied after all wing measurements. Slower; used as a cross-check.
JointTable joint_table_bsm_last(const ScenarioConfig& config);

/// Sums out the other observer on each wing and averages over its two
/// (unbiased) setting choices.
TripartiteDistribution marginal_tripartite(const JointTable& table, int n, int m);

/// Array of 16 objects {"settings": {"i1":..}, "probs": {"a1a2b0b1c1c2": p}}.
nlohmann::json to_json(const JointTable& table);
/// Header i1,i2,j1,j2,a1,a2,b0,b1,c1,c2,p; 17 significant digits.
void write_csv(std::ostream& out, const JointTable& table);

class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bilocal
