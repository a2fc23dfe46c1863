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

#include "bilocal/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bilocal {

namespace {

constexpr double kTieMargin = 1e-12;
constexpr double kReproTolerance = 1e-9;
constexpr double kSlackFloor = -1e-12;

// Each free parameter writes the flat angle indices in its group.
using Groups = std::vector<std::vector<int>>;

const Groups kSymmetricGroups{{0, 1}, {2, 3}, {4, 5}, {6, 7}};

ScenarioAngles apply_params(const ScenarioAngles& base, const Groups& groups,
                            std::span<const double> params) {
  std::array<double, 8> flat = base.flat();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (int idx : groups[g]) flat[idx] = params[g];
  }
  return ScenarioAngles::from_flat(flat);
}

struct Scorer {
  unsigned mask;
  std::function<double(const BrgpValues&)> score;
};

Scorer make_scorer(const Objective& objective) {
  switch (objective.mode) {
    case OptimizationMode::Passive:
      return {kPair11, [](const BrgpValues& v) { return v.b(1, 1); }};
    case OptimizationMode::MaxMin: {
      if (objective.pairs.empty()) throw std::invalid_argument("max-min objective needs pairs");
      unsigned mask = 0;
      for (auto [n, m] : objective.pairs) {
        if ((n != 1 && n != 2) || (m != 1 && m != 2)) {
          throw std::invalid_argument("observer indices must be 1 or 2");
        }
        mask |= 1u << ((n - 1) * 2 + (m - 1));
      }
      auto pairs = objective.pairs;
      return {mask, [pairs](const BrgpValues& v) {
                double worst = std::numeric_limits<double>::infinity();
                for (auto [n, m] : pairs) worst = std::min(worst, v.b(n, m));
                return worst;
              }};
    }
    case OptimizationMode::Active:
      // Infeasible points score below every feasible one (B22 >= 0) and
      // improve as B11 approaches the bound.
      return {kPair11 | kPair22, [](const BrgpValues& v) {
                const double b11 = v.b(1, 1);
                return b11 >= 1.0 ? v.b(2, 2) : -1.0 - (1.0 - b11);
              }};
  }
  throw std::invalid_argument("unknown optimization mode");
}

// Objective value from the joint-table route. Active mode reports B22 and
// checks the constraint separately, so rounding at B11 = 1 cannot flip it.
double pipeline_score(const Objective& objective, const BrgpSet& set) {
  switch (objective.mode) {
    case OptimizationMode::Passive: return set.B(1, 1);
    case OptimizationMode::Active: return set.B(2, 2);
    case OptimizationMode::MaxMin: {
      BrgpValues v;
      for (int k = 0; k < 4; ++k) v.B[k] = set.results[k].B;
      return make_scorer(objective).score(v);
    }
  }
  return 0.0;
}

struct SearchPoint {
  ScenarioAngles angles;
  double value = -std::numeric_limits<double>::infinity();
};

// Exhaustive grid over the symmetric parameters flagged in `free`; the
// others keep their values from `base`. Iterates in increasing
// lexicographic angle order and only replaces the incumbent on a strict
// improvement, so ties resolve to the smallest angle vector.
SearchPoint grid_search(const CorrelatorModel& model, const Scorer& scorer,
                        const ScenarioAngles& base, const std::array<bool, 4>& free,
                        int points) {
  if (points < 2) throw std::invalid_argument("grid needs at least two points per angle");
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[k] = M_PI * k / (points - 1);

  const std::array<double, 4> fixed{base.alice[0].setting0, base.alice[1].setting0,
                                    base.charlie[0].setting0, base.charlie[1].setting0};
  std::array<std::vector<double>, 4> values;
  for (int d = 0; d < 4; ++d) values[d] = free[d] ? grid : std::vector<double>{fixed[d]};

  std::array<std::vector<ObserverAxes>, 4> axes;
  for (int d = 0; d < 4; ++d) {
    const Wing wing = d < 2 ? Wing::Alice : Wing::Charlie;
    for (double angle : values[d]) axes[d].push_back(observer_axes(wing, ObserverAngles::both(angle)));
  }

  std::array<std::size_t, 4> best_idx{};
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a1 = 0; a1 < values[0].size(); ++a1) {
    for (std::size_t a2 = 0; a2 < values[1].size(); ++a2) {
      for (std::size_t c1 = 0; c1 < values[2].size(); ++c1) {
        for (std::size_t c2 = 0; c2 < values[3].size(); ++c2) {
          const double s = scorer.score(
              model.evaluate(axes[0][a1], axes[1][a2], axes[2][c1], axes[3][c2], scorer.mask));
          if (s > best + kTieMargin) {
            best = s;
            best_idx = {a1, a2, c1, c2};
          }
        }
      }
    }
  }
  SearchPoint out;
  out.value = best;
  out.angles = ScenarioAngles::symmetric(values[0][best_idx[0]], values[1][best_idx[1]],
                                         values[2][best_idx[2]], values[3][best_idx[3]]);
  // Keep per-setting values of non-free observers from `base`.
  if (!free[0]) out.angles.alice[0] = base.alice[0];
  if (!free[1]) out.angles.alice[1] = base.alice[1];
  if (!free[2]) out.angles.charlie[0] = base.charlie[0];
  if (!free[3]) out.angles.charlie[1] = base.charlie[1];
  return out;
}

SearchPoint refine(const CorrelatorModel& model, const Scorer& scorer, const SearchPoint& start,
                   const Groups& groups, const OptimizerOptions& options, double step,
                   int& iterations) {
  const std::array<double, 8> flat = start.angles.flat();
  std::vector<double> x0;
  for (const auto& g : groups) x0.push_back(flat[g.front()]);
  auto f = [&](std::span<const double> p) {
    return scorer.score(model.evaluate(apply_params(start.angles, groups, p), scorer.mask));
  };
  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.tolerance = options.tolerance;
  nm.initial_step = step;
  const NelderMeadResult r = nelder_mead_maximize(f, x0, nm);
  iterations += r.iterations;
  SearchPoint out{apply_params(start.angles, groups, r.x), r.value};
  if (out.value < start.value) return start;
  return out;
}

Groups groups_for(const std::array<bool, 4>& free, bool full_angles) {
  Groups groups;
  for (int d = 0; d < 4; ++d) {
    if (!free[d]) continue;
    if (full_angles) {
      groups.push_back({kSymmetricGroups[d][0]});
      groups.push_back({kSymmetricGroups[d][1]});
    } else {
      groups.push_back(kSymmetricGroups[d]);
    }
  }
  return groups;
}

// Grid, then symmetric refinement, then optionally per-setting refinement.
SearchPoint search(const CorrelatorModel& model, const Scorer& scorer, const ScenarioAngles& base,
                   const std::array<bool, 4>& free, const OptimizerOptions& options,
                   double& grid_value, int& iterations,
                   const std::optional<SearchPoint>& extra_seed = std::nullopt) {
  SearchPoint best = grid_search(model, scorer, base, free, options.grid_points);
  grid_value = best.value;
  if (extra_seed && extra_seed->value > best.value) best = *extra_seed;
  const double step = M_PI / (options.grid_points - 1);
  best = refine(model, scorer, best, groups_for(free, false), options, step, iterations);
  if (options.full_angles) {
    best = refine(model, scorer, best, groups_for(free, true), options, step / 4, iterations);
  }
  return best;
}

}  // namespace

NelderMeadResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> start,
                                      const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0) throw std::invalid_argument("nelder_mead_maximize: empty start point");
  auto clamp = [&](std::vector<double>& x) {
    for (double& v : x) v = std::clamp(v, options.lower, options.upper);
  };
  clamp(start);

  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (std::size_t k = 0; k < dim; ++k) {
    double& v = simplex[k + 1][k];
    v = v + options.initial_step <= options.upper ? v + options.initial_step
                                                   : v - options.initial_step;
  }
  std::vector<double> values(dim + 1);
  for (std::size_t k = 0; k <= dim; ++k) values[k] = f(simplex[k]);

  std::vector<std::size_t> order(dim + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::vector<double>> s(dim + 1);
    std::vector<double> v(dim + 1);
    for (std::size_t k = 0; k <= dim; ++k) {
      s[k] = std::move(simplex[order[k]]);
      v[k] = values[order[k]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };
  auto along = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = c[k] + t * (w[k] - c[k]);
    clamp(x);
    return x;
  };

  NelderMeadResult result;
  sort_simplex();
  for (; result.iterations < options.max_iterations; ++result.iterations) {
    if (std::abs(values.front() - values.back()) <= options.tolerance) {
      result.converged = true;
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[k][d] / dim;
    }
    const std::vector<double>& worst = simplex.back();
    std::vector<double> reflected = along(centroid, worst, -1.0);
    const double fr = f(reflected);
    if (fr > values.front()) {
      std::vector<double> expanded = along(centroid, worst, -2.0);
      const double fe = f(expanded);
      if (fe > fr) {
        simplex.back() = std::move(expanded);
        values.back() = fe;
      } else {
        simplex.back() = std::move(reflected);
        values.back() = fr;
      }
    } else if (fr > values[dim - 1]) {
      simplex.back() = std::move(reflected);
      values.back() = fr;
    } else {
      const bool outside = fr > values.back();
      std::vector<double> contracted =
          outside ? along(centroid, reflected, 0.5) : along(centroid, worst, 0.5);
      const double fc = f(contracted);
      if (outside ? fc >= fr : fc > values.back()) {
        simplex.back() = std::move(contracted);
        values.back() = fc;
      } else {
        for (std::size_t k = 1; k <= dim; ++k) {
          simplex[k] = along(simplex[0], simplex[k], 0.5);
          values[k] = f(simplex[k]);
        }
      }
    }
    sort_simplex();
  }
  if (!result.converged) {
    result.converged = std::abs(values.front() - values.back()) <= options.tolerance;
  }
  result.x = simplex.front();
  result.value = values.front();
  return result;
}

const char* to_string(OptimizationMode mode) {
  switch (mode) {
    case OptimizationMode::Passive: return "passive";
    case OptimizationMode::MaxMin: return "max-min";
    case OptimizationMode::Active: return "active";
  }
  return "unknown";
}

OptimizationResult optimize_angles(const ScenarioConfig& base, const Objective& objective,
                                   const OptimizerOptions& options) {
  base.validate();
  const CorrelatorModel model(base);
  OptimizationResult result;
  result.mode = objective.mode;

  constexpr std::array<bool, 4> kFirst{true, false, true, false};
  constexpr std::array<bool, 4> kSecond{false, true, false, true};
  constexpr std::array<bool, 4> kAll{true, true, true, true};

  const Scorer b11{kPair11, [](const BrgpValues& v) { return v.b(1, 1); }};
  const Scorer b22{kPair22, [](const BrgpValues& v) { return v.b(2, 2); }};
  const ScenarioAngles zero = ScenarioAngles::uniform(0.0);

  SearchPoint best;
  double grid_value = 0.0;
  switch (objective.mode) {
    case OptimizationMode::Passive: {
      const SearchPoint first = search(model, b11, zero, kFirst, options, grid_value,
                                       result.iterations);
      double ignored = 0.0;
      const SearchPoint second = search(model, b22, first.angles, kSecond, options, ignored,
                                        result.iterations);
      best = {second.angles, first.value};
      break;
    }
    case OptimizationMode::MaxMin:
      best = search(model, make_scorer(objective), zero, kAll, options, grid_value,
                    result.iterations);
      break;
    case OptimizationMode::Active: {
      double ignored = 0.0;
      int scratch = 0;
      const SearchPoint first = search(model, b11, zero, kFirst, options, ignored, scratch);
      if (first.value < 1.0) {
        throw InfeasibleError("B11 >= 1 is unreachable: best B11 is " +
                              std::to_string(first.value));
      }
      // Feasible seed: B11-optimal first observers, best later observers.
      const SearchPoint second = search(model, b22, first.angles, kSecond, options, ignored,
                                        scratch);
      const Scorer scorer = make_scorer(objective);
      const SearchPoint seed{second.angles, scorer.score(model.evaluate(second.angles))};
      best = search(model, scorer, zero, kAll, options, grid_value, result.iterations, seed);
      break;
    }
  }

  ScenarioConfig final_config = base;
  final_config.angles = best.angles;
  result.angles = best.angles;
  result.brgp = evaluate_scenario(final_config);
  result.grid_objective = grid_value;
  result.objective = pipeline_score(objective, result.brgp);
  if (std::abs(result.objective - best.value) > kReproTolerance) {
    throw ConsistencyError("optimizer objective " + std::to_string(best.value) +
                           " not reproduced by the joint table (" +
                           std::to_string(result.objective) + ")");
  }
  if (objective.mode == OptimizationMode::Active) {
    result.constraint_slack = result.brgp.B(1, 1) - 1.0;
    if (*result.constraint_slack < kSlackFloor) {
      throw ConsistencyError("active optimum violates B11 >= 1");
    }
  }
  return result;
}

nlohmann::json to_json(const OptimizationResult& r) {
  auto pair = [](const ObserverAngles& a) { return nlohmann::json::array({a.setting0, a.setting1}); };
  nlohmann::json brgp = nlohmann::json::array();
  for (const BrgpResult& b : r.brgp.results) brgp.push_back(to_json(b));
  return {{"mode", to_string(r.mode)},
          {"objective", r.objective},
          {"grid_objective", r.grid_objective},
          {"angles",
           {{"alice1", pair(r.angles.alice[0])},
            {"alice2", pair(r.angles.alice[1])},
            {"charlie1", pair(r.angles.charlie[0])},
            {"charlie2", pair(r.angles.charlie[1])}}},
          {"constraint_slack",
           r.constraint_slack ? nlohmann::json(*r.constraint_slack) : nlohmann::json(nullptr)},
          {"brgp", std::move(brgp)},
          {"iterations", r.iterations}};
}

}  // namespace bilocal
