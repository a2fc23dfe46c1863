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

#include "bilocal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace bilocal {

namespace {

PointerFactors factors_for(PointerModel model, double g) {
  if (model == PointerModel::Explicit) {
    throw std::invalid_argument("explicit pointers have no G-parameterized quality factor");
  }
  return pointer_factors(PointerSpec{model, g, 0.0});
}

double pick(const PassiveValues& v, int n, int m) { return v.as_array()[(n - 1) * 2 + (m - 1)]; }

template <typename Fn>
std::vector<SweepPoint> parallel_map(std::span<const double> grid, int jobs, Fn&& fn) {
  std::vector<SweepPoint> out(grid.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(jobs < 1 ? 1 : jobs, grid.size()));
  if (workers == 1) {
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = fn(grid[k]);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < grid.size(); k += workers) out[k] = fn(grid[k]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

SweepPoint make_point(const ScenarioConfig& config) {
  const PointerFactors a = pointer_factors(config.alice1);
  const PointerFactors c = pointer_factors(config.charlie1);
  const BrgpSet set = evaluate_scenario(config);
  SweepPoint p{a.G, c.G, a.F, c.F, {}, false};
  for (int k = 0; k < 4; ++k) p.B[k] = set.results[k].B;
  p.all_violated = *std::min_element(p.B.begin(), p.B.end()) > 1.0;
  return p;
}

// Largest x in [lo, hi] with pred(x) true, given pred(lo) != pred(hi).
double bisect(const std::function<bool(double)>& pred, double lo, double hi, double tolerance) {
  const bool at_lo = pred(lo);
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PassiveValues closed_form_passive(const PointerFactors& a, const PointerFactors& c, double v1,
                                  double v2) {
  const double scale = std::sqrt(v1 * v2);
  PassiveValues out;
  out.B11 = scale * std::sqrt(2.0 * a.G * c.G);
  out.B12 = scale * std::sqrt((1.0 + c.F) * a.G);
  out.B21 = scale * std::sqrt((1.0 + a.F) * c.G);
  out.B22 = scale * std::sqrt((1.0 + a.F) * (1.0 + c.F) / 2.0);
  return out;
}

ActiveSolution closed_form_active(double G) {
  if (!(G >= 0.0 && G <= 1.0)) throw std::invalid_argument("G must lie in [0, 1]");
  ActiveSolution s;
  s.G = G;
  s.F = std::sqrt(std::max(0.0, 1.0 - G * G));
  const double f = s.F;
  if (G <= kActiveBranchPoint) {
    s.B11 = std::sqrt(2.0) * G;
    s.B22 = (1.0 + f) / std::sqrt(2.0);
    s.theta_first = s.theta_second = M_PI / 4.0;
    return s;
  }
  s.upper_branch = true;
  s.B11 = (f + std::sqrt(2.0 - f * (2.0 + f))) * G / std::sqrt(2.0 - 2.0 * f);
  s.B22 = std::sqrt(1.0 + f * f * f + 0.5 * f * f * f * f);
  s.theta_first = 0.5 * std::acos(std::clamp(1.0 - f * f / (1.0 - f), -1.0, 1.0));
  s.theta_second = std::acos(
      std::clamp((2.0 - f * f) / std::sqrt(4.0 + 2.0 * f * f * f * (2.0 + f)), -1.0, 1.0));
  return s;
}

ScenarioConfig make_config(const PointerSpec& alice1, const PointerSpec& charlie1,
                           const ScenarioAngles& angles, double v1, double v2) {
  ScenarioConfig config;
  config.v1 = v1;
  config.v2 = v2;
  config.alice1 = alice1;
  config.charlie1 = charlie1;
  config.angles = angles;
  return config;
}

std::vector<SweepPoint> passive_sweep(PointerModel alice_model, PointerModel charlie_model,
                                      std::span<const double> grid, int jobs) {
  const ScenarioAngles angles = ScenarioAngles::uniform(M_PI / 4.0);
  return parallel_map(grid, jobs, [&](double g) {
    return make_point(make_config({alice_model, g, 0.0}, {charlie_model, g, 0.0}, angles));
  });
}

std::vector<SweepPoint> active_sweep(std::span<const double> grid, int jobs) {
  return parallel_map(grid, jobs, [](double g) {
    const ActiveSolution s = closed_form_active(g);
    return make_point(make_config(PointerSpec::optimal(g), PointerSpec::optimal(g), s.angles()));
  });
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  const bool equal_g = std::all_of(points.begin(), points.end(),
                                   [](const SweepPoint& p) { return p.G1 == p.G2; });
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << (equal_g ? "G" : "G1,G2") << ",F1,F2,B11,B12,B21,B22,all_violated\n";
  for (const SweepPoint& p : points) {
    if (equal_g) {
      buf << p.G1;
    } else {
      buf << p.G1 << ',' << p.G2;
    }
    buf << ',' << p.F1 << ',' << p.F2;
    for (double b : p.B) buf << ',' << b;
    buf << ',' << (p.all_violated ? 1 : 0) << '\n';
  }
  out << buf.str();
}

nlohmann::json to_json(const SweepPoint& p) {
  return {{"G1", p.G1}, {"G2", p.G2}, {"F1", p.F1},   {"F2", p.F2},
          {"B11", p.B[0]}, {"B12", p.B[1]}, {"B21", p.B[2]}, {"B22", p.B[3]},
          {"all_violated", p.all_violated}};
}

const PairSet& all_pairs() {
  static const PairSet pairs{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  return pairs;
}

const PairSet& first_and_last_pairs() {
  static const PairSet pairs{{1, 1}, {2, 2}};
  return pairs;
}

double closed_form_min(PointerModel alice_model, PointerModel charlie_model, double G,
                       const PairSet& pairs, double visibility) {
  const PassiveValues v = closed_form_passive(factors_for(alice_model, G),
                                              factors_for(charlie_model, G), 1.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (auto [n, m] : pairs) worst = std::min(worst, pick(v, n, m));
  return visibility * worst;
}

std::vector<Interval> violation_windows(PointerModel alice_model, PointerModel charlie_model,
                                        const PairSet& pairs, double visibility,
                                        double tolerance) {
  constexpr int kScan = 2000;
  auto inside = [&](double g) {
    return closed_form_min(alice_model, charlie_model, g, pairs, visibility) > 1.0;
  };
  std::vector<Interval> windows;
  double open = 0.0;
  bool prev = inside(0.0);
  double prev_g = 0.0;
  for (int k = 1; k <= kScan; ++k) {
    const double g = static_cast<double>(k) / kScan;
    const bool now = inside(g);
    if (now != prev) {
      const double edge = bisect(inside, prev_g, g, tolerance);
      if (now) {
        open = edge;
      } else {
        windows.push_back({open, edge});
      }
    }
    prev = now;
    prev_g = g;
  }
  if (prev) windows.push_back({open, 1.0});
  return windows;
}

ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          int samples, double tolerance) {
  if (samples < 3) samples = 3;
  const double h = (hi - lo) / (samples - 1);
  int best = 0;
  double best_value = f(lo);
  for (int k = 1; k < samples; ++k) {
    const double v = f(lo + k * h);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  double a = std::max(lo, lo + (best - 1) * h);
  double b = std::min(hi, lo + (best + 1) * h);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tolerance) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  ScalarMax out{0.5 * (a + b), f(0.5 * (a + b))};
  if (best_value > out.value) out = {lo + best * h, best_value};
  return out;
}

ScalarMax max_simultaneous(PointerModel alice_model, PointerModel charlie_model,
                           const PairSet& pairs, double visibility) {
  return maximize_scalar(
      [&](double g) { return closed_form_min(alice_model, charlie_model, g, pairs, visibility); },
      0.0, 1.0);
}

MixedOptimum optimize_pointer_pair(PointerModel alice_model, PointerModel charlie_model) {
  auto values = [&](double g1, double g2) {
    return closed_form_passive(factors_for(alice_model, g1), factors_for(charlie_model, g2));
  };
  auto best_g2 = [&](double g1) {
    auto gap = [&](double g2) {
      const PassiveValues v = values(g1, g2);
      return v.B11 - v.B22;
    };
    if (gap(1.0) <= 0.0) return 1.0;
    return bisect([&](double g2) { return gap(g2) > 0.0; }, 0.0, 1.0, 1e-14);
  };
  auto ridge = [&](double g1) {
    const PassiveValues v = values(g1, best_g2(g1));
    return std::min(v.B11, v.B22);
  };
  const ScalarMax top = maximize_scalar(ridge, 0.0, 1.0, 1001, 1e-10);

  MixedOptimum out;
  out.G1 = top.x;
  out.G2 = best_g2(top.x);
  out.value = top.value;
  const PointerSpec alice{alice_model, out.G1, 0.0};
  const PointerSpec charlie{charlie_model, out.G2, 0.0};
  const BrgpSet set =
      evaluate_scenario(make_config(alice, charlie, ScenarioAngles::uniform(M_PI / 4.0)));
  out.pipeline_value = std::min(set.B(1, 1), set.B(2, 2));
  out.angles = optimize_angles(make_config(alice, charlie, ScenarioAngles::uniform(0.0)),
                               Objective::passive())
                   .angles;
  return out;
}

NoiseResult noise_sweep(PointerModel alice_model, PointerModel charlie_model,
                        double resolution) {
  if (!(resolution >= 1e-4 && resolution <= 1.0)) {
    throw std::invalid_argument("noise resolution must lie in [1e-4, 1]");
  }
  NoiseResult out;
  const ScalarMax peak = max_simultaneous(alice_model, charlie_model, first_and_last_pairs());
  out.peak_noiseless = peak.value;
  out.G_at_critical = peak.x;
  out.achievable = peak.value > 1.0;
  out.critical_visibility = out.achievable ? 1.0 / peak.value : 1.0;

  const int steps = static_cast<int>(std::llround(1.0 / resolution));
  for (int k = 1; k <= steps; ++k) {
    const double v = std::min(1.0, k * resolution);
    NoiseBoundaryRow row{v, false, 0.0, 0.0};
    const auto windows =
        violation_windows(alice_model, charlie_model, first_and_last_pairs(), v);
    if (!windows.empty()) {
      row.violated = true;
      row.G_low = windows.front().lo;
      row.G_high = windows.back().hi;
    }
    out.boundary.push_back(row);
  }
  return out;
}

VerifyReport verify_closed_forms(int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> model_pick(0, 2);
  auto random_pointer = [&] {
    const double g = unit(rng);
    switch (model_pick(rng)) {
      case 0: return PointerSpec::optimal(g);
      case 1: return PointerSpec::square(g);
      default: return PointerSpec::explicit_factors(unit(rng) * std::sqrt(1.0 - g * g), g);
    }
  };

  VerifyReport report;
  report.trials = trials;
  const ScenarioAngles angles = ScenarioAngles::uniform(M_PI / 4.0);
  for (int t = 0; t < trials; ++t) {
    VerifyCase c;
    c.alice1 = random_pointer();
    c.charlie1 = random_pointer();
    c.v1 = unit(rng);
    c.v2 = unit(rng);
    const BrgpSet set = evaluate_scenario(make_config(c.alice1, c.charlie1, angles, c.v1, c.v2));
    const PassiveValues closed = closed_form_passive(pointer_factors(c.alice1),
                                                     pointer_factors(c.charlie1), c.v1, c.v2);
    const auto expected = closed.as_array();
    for (int k = 0; k < 4; ++k) {
      c.deviation = std::max(c.deviation, std::abs(expected[k] - set.results[k].B));
    }
    if (t == 0 || c.deviation > report.max_deviation) {
      report.max_deviation = c.deviation;
      report.worst = c;
    }
  }
  return report;
}

nlohmann::json to_json(const PointerSpec& spec) {
  const PointerFactors f = pointer_factors(spec);
  return {{"model", to_string(spec.model)}, {"G", f.G}, {"F", f.F}};
}

}  // namespace bilocal
