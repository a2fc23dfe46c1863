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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bilocal/optimizer.hpp"

namespace bilocal {

/// B11, B12, B21, B22 at the passive optimum (all angles pi/4), scaled by
/// sqrt(v1 v2) for Werner sources.
struct PassiveValues {
  double B11 = 0.0, B12 = 0.0, B21 = 0.0, B22 = 0.0;

  std::array<double, 4> as_array() const { return {B11, B12, B21, B22}; }
};

PassiveValues closed_form_passive(const PointerFactors& alice1, const PointerFactors& charlie1,
                                  double v1 = 1.0, double v2 = 1.0);

/**
 * Piecewise active-sharing solution for equal optimal pointers
 * (F = sqrt(1 - G^2)). For G <= 0.8 it is the passive optimum at pi/4;
 * above, both first observers use theta1 = acos(1 - F^2/(1 - F))/2 and both
 * second observers theta2 = acos((2 - F^2)/sqrt(4 + 2F^3(2 + F))).
 */
struct ActiveSolution {
  double G = 0.0;
  double F = 0.0;
  double B11 = 0.0;
  double B22 = 0.0;
  double theta_first = 0.0;
  double theta_second = 0.0;
  bool upper_branch = false;  // G > 0.8

  ScenarioAngles angles() const {
    return ScenarioAngles::symmetric(theta_first, theta_second, theta_first, theta_second);
  }
};

inline constexpr double kActiveBranchPoint = 0.8;

ActiveSolution closed_form_active(double G);

/// Scenario with the given pointers, G1 = G2 = G or separate G's, unit visibility.
ScenarioConfig make_config(const PointerSpec& alice1, const PointerSpec& charlie1,
                           const ScenarioAngles& angles, double v1 = 1.0, double v2 = 1.0);

struct SweepPoint {
  double G1 = 0.0, G2 = 0.0;
  double F1 = 0.0, F2 = 0.0;
  std::array<double, 4> B{};  // 11, 12, 21, 22
  bool all_violated = false;  // min of all four B > 1

  double b(int n, int m) const { return B[(n - 1) * 2 + (m - 1)]; }
  bool double_violated() const { return b(1, 1) > 1.0 && b(2, 2) > 1.0; }
};

/// Joint-table evaluation at all angles pi/4 for G1 = G2 = G over `grid`.
/// Points are independent and may be spread over `jobs` threads; output is
/// in grid order.
std::vector<SweepPoint> passive_sweep(PointerModel alice_model, PointerModel charlie_model,
                                      std::span<const double> grid, int jobs = 1);

/// Joint-table evaluation at closed_form_active() angles, optimal pointers.
std::vector<SweepPoint> active_sweep(std::span<const double> grid, int jobs = 1);

/// Writes G (or G1,G2 when they differ anywhere), F1, F2, B11, B12, B21,
/// B22, all_violated with 17 significant digits.
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);
nlohmann::json to_json(const SweepPoint& point);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Triples whose simultaneous violation is asked for.
using PairSet = std::vector<std::pair<int, int>>;
const PairSet& all_pairs();
const PairSet& first_and_last_pairs();  // {11, 22}

/// min over `pairs` of the closed-form B at G1 = G2 = G.
double closed_form_min(PointerModel alice_model, PointerModel charlie_model, double G,
                       const PairSet& pairs, double visibility = 1.0);

/**
 * G intervals (with G1 = G2 = G) on which every B in `pairs` exceeds 1,
 * from the closed forms. Sign changes are bracketed on a scan and then
 * bisected to `tolerance`.
 */
std::vector<Interval> violation_windows(PointerModel alice_model, PointerModel charlie_model,
                                        const PairSet& pairs, double visibility = 1.0,
                                        double tolerance = 1e-6);

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

/// Dense scan on [lo, hi] followed by golden-section refinement around the
/// best sample.
ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          int samples = 2001, double tolerance = 1e-12);

/// Largest simultaneous value min over `pairs` along G1 = G2 = G.
ScalarMax max_simultaneous(PointerModel alice_model, PointerModel charlie_model,
                           const PairSet& pairs, double visibility = 1.0);

struct MixedOptimum {
  double G1 = 0.0;
  double G2 = 0.0;
  double value = 0.0;           // closed form
  double pipeline_value = 0.0;  // joint table at pi/4
  ScenarioAngles angles;        // passive optimizer's angles at (G1, G2)
};

/**
 * Maximizes min(B11, B22) over independent (G1, G2) at the passive optimum.
 * B11 increases and B22 decreases in G2, so for each G1 the best G2 sits on
 * the crossing B11 = B22; that ridge is scanned and refined in G1.
 */
MixedOptimum optimize_pointer_pair(PointerModel alice_model, PointerModel charlie_model);

struct NoiseBoundaryRow {
  double V = 0.0;
  bool violated = false;  // some G gives min(B11, B22) > 1
  double G_low = 0.0;
  double G_high = 0.0;
};

struct NoiseResult {
  bool achievable = false;          // double violation possible at V = 1
  double critical_visibility = 1.0; // V* (meaningful only when achievable)
  double G_at_critical = 0.0;
  double peak_noiseless = 0.0;      // max_G min(B11, B22) at V = 1
  std::vector<NoiseBoundaryRow> boundary;
};

/**
 * Critical visibility V = sqrt(v1 v2) for double violation of B11 and B22
 * at pi/4 with G1 = G2 = G. Every B scales as V, so V* = 1 / max_G min.
 * The boundary rows cover V in [resolution, 1] in steps of `resolution`.
 */
NoiseResult noise_sweep(PointerModel alice_model, PointerModel charlie_model,
                        double resolution = 1e-3);

struct VerifyCase {
  PointerSpec alice1;
  PointerSpec charlie1;
  double v1 = 1.0;
  double v2 = 1.0;
  double deviation = 0.0;
};

struct VerifyReport {
  int trials = 0;
  double max_deviation = 0.0;
  VerifyCase worst;
};

/// Random (pointer model, G, F, v1, v2) configurations; compares
/// closed_form_passive against the joint-table pipeline at pi/4.
VerifyReport verify_closed_forms(int trials, std::uint64_t seed);

nlohmann::json to_json(const PointerSpec& spec);

}  // namespace bilocal
