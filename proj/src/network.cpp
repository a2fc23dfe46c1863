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

#include "bilocal/network.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

namespace bilocal {

namespace {

constexpr double kImagResidue = 1e-10;
constexpr double kNormTolerance = 1e-10;

bool angle_in_range(double angle) { return angle >= 0.0 && angle <= M_PI; }

// Embedded projectors [setting][outcome] of one observer.
using ProjectorSet = std::array<std::array<ComplexMatrix, 2>, 2>;

ProjectorSet observer_projectors(Wing wing, const ObserverAngles& angles, int num_qubits) {
  ProjectorSet out;
  for (int s = 0; s < 2; ++s) {
    const Observable obs{wing, s, angles[s]};
    for (int o = 0; o < 2; ++o) out[s][o] = embed(projector(obs, o), wing, num_qubits);
  }
  return out;
}

double real_probability(const Complex& value) {
  if (std::abs(value.imag()) > kImagResidue) {
    throw ConsistencyError("probability has imaginary part " + std::to_string(value.imag()));
  }
  return value.real();
}

struct WingOperators {
  ProjectorSet first;
  ProjectorSet second;
  PointerFactors pointer;
};

// Applies one wing's unsharp-then-projective pair for fixed settings and
// calls `next(state, first_outcome, second_outcome)` for each branch.
template <typename Next>
void apply_wing(const ComplexMatrix& rho, const WingOperators& ops, int s1, int s2,
                Next&& next) {
  for (int o1 = 0; o1 < 2; ++o1) {
    const ComplexMatrix after_first =
        weak_instrument(rho, ops.first[s1][o1], ops.first[s1][1 - o1], ops.pointer);
    for (int o2 = 0; o2 < 2; ++o2) {
      next(strong_instrument(after_first, ops.second[s2][o2]), o1, o2);
    }
  }
}

void check_normalization(const JointTable& table) {
  for (int ctx = 0; ctx < JointTable::kContexts; ++ctx) {
    const double total = table.context_total(ctx);
    if (std::abs(total - 1.0) > kNormTolerance) {
      throw ConsistencyError("setting context " + std::to_string(ctx) + " sums to " +
                             std::to_string(total));
    }
  }
}

}  // namespace

ScenarioAngles ScenarioAngles::uniform(double angle) {
  return symmetric(angle, angle, angle, angle);
}

ScenarioAngles ScenarioAngles::symmetric(double alice1, double alice2, double charlie1,
                                         double charlie2) {
  ScenarioAngles a;
  a.alice = {ObserverAngles::both(alice1), ObserverAngles::both(alice2)};
  a.charlie = {ObserverAngles::both(charlie1), ObserverAngles::both(charlie2)};
  return a;
}

std::array<double, 8> ScenarioAngles::flat() const {
  return {alice[0].setting0,   alice[0].setting1,   alice[1].setting0,
          alice[1].setting1,   charlie[0].setting0, charlie[0].setting1,
          charlie[1].setting0, charlie[1].setting1};
}

ScenarioAngles ScenarioAngles::from_flat(const std::array<double, 8>& v) {
  ScenarioAngles a;
  a.alice = {ObserverAngles{v[0], v[1]}, ObserverAngles{v[2], v[3]}};
  a.charlie = {ObserverAngles{v[4], v[5]}, ObserverAngles{v[6], v[7]}};
  return a;
}

void ScenarioConfig::validate() const {
  if (!(v1 >= 0.0 && v1 <= 1.0) || !(v2 >= 0.0 && v2 <= 1.0)) {
    throw std::invalid_argument("visibilities must lie in [0, 1]");
  }
  for (double angle : angles.flat()) {
    if (!angle_in_range(angle)) {
      throw std::invalid_argument("measurement angles must lie in [0, pi]");
    }
  }
  pointer_factors(alice1);
  pointer_factors(charlie1);
}

int JointTable::context_index(const SettingContext& s) {
  return ((s.i1 * 2 + s.i2) * 2 + s.j1) * 2 + s.j2;
}

SettingContext JointTable::context_at(int index) {
  return {(index >> 3) & 1, (index >> 2) & 1, (index >> 1) & 1, index & 1};
}

int JointTable::outcome_index(const RunOutcome& o) {
  return ((((o.a1 * 2 + o.a2) * 2 + o.b0) * 2 + o.b1) * 2 + o.c1) * 2 + o.c2;
}

RunOutcome JointTable::outcome_at(int index) {
  return {(index >> 5) & 1, (index >> 4) & 1, (index >> 3) & 1,
          (index >> 2) & 1, (index >> 1) & 1, index & 1};
}

double JointTable::context_total(int context) const {
  double total = 0.0;
  for (int o = 0; o < kOutcomes; ++o) total += at(context, o);
  return total;
}

double JointTable::max_abs_diff(const JointTable& other) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    worst = std::max(worst, std::abs(probs_[k] - other.probs_[k]));
  }
  return worst;
}

TripartiteDistribution::TripartiteDistribution(int n, int m) : n_(n), m_(m) {
  if ((n != 1 && n != 2) || (m != 1 && m != 2)) {
    throw std::invalid_argument("observer indices must be 1 or 2");
  }
}

double TripartiteDistribution::context_total(int x, int z) const {
  double total = 0.0;
  for (int k = 0; k < 16; ++k) total += probs_[(x * 2 + z) * 16 + k];
  return total;
}

DensityOperator build_initial(const ScenarioConfig& config) {
  return DensityOperator(
      kron(werner_state(config.v1).matrix(), werner_state(config.v2).matrix()));
}

JointTable joint_table(const ScenarioConfig& config, MeasurementOrder order) {
  config.validate();
  const DensityOperator initial = build_initial(config);
  const WingOperators alice{observer_projectors(Wing::Alice, config.angles.alice[0], 2),
                            observer_projectors(Wing::Alice, config.angles.alice[1], 2),
                            pointer_factors(config.alice1)};
  const WingOperators charlie{
      observer_projectors(Wing::Charlie, config.angles.charlie[0], 2),
      observer_projectors(Wing::Charlie, config.angles.charlie[1], 2),
      pointer_factors(config.charlie1)};

  JointTable table;
  for (int b0 = 0; b0 < 2; ++b0) {
    for (int b1 = 0; b1 < 2; ++b1) {
      const ComplexMatrix reduced = bsm_reduce(initial, b0, b1).matrix();
      for (int ctx = 0; ctx < JointTable::kContexts; ++ctx) {
        const SettingContext s = JointTable::context_at(ctx);
        auto record = [&](const ComplexMatrix& final_state, int a1, int a2, int c1, int c2) {
          table.at(ctx, JointTable::outcome_index({a1, a2, b0, b1, c1, c2})) =
              real_probability(final_state.trace());
        };
        if (order == MeasurementOrder::AliceFirst) {
          apply_wing(reduced, alice, s.i1, s.i2, [&](const ComplexMatrix& r, int a1, int a2) {
            apply_wing(r, charlie, s.j1, s.j2, [&](const ComplexMatrix& f, int c1, int c2) {
              record(f, a1, a2, c1, c2);
            });
          });
        } else {
          apply_wing(reduced, charlie, s.j1, s.j2, [&](const ComplexMatrix& r, int c1, int c2) {
            apply_wing(r, alice, s.i1, s.i2, [&](const ComplexMatrix& f, int a1, int a2) {
              record(f, a1, a2, c1, c2);
            });
          });
        }
      }
    }
  }
  check_normalization(table);
  return table;
}

JointTable joint_table_bsm_last(const ScenarioConfig& config) {
  config.validate();
  const ComplexMatrix initial = build_initial(config).matrix();
  const WingOperators alice{observer_projectors(Wing::Alice, config.angles.alice[0], 4),
                            observer_projectors(Wing::Alice, config.angles.alice[1], 4),
                            pointer_factors(config.alice1)};
  const WingOperators charlie{
      observer_projectors(Wing::Charlie, config.angles.charlie[0], 4),
      observer_projectors(Wing::Charlie, config.angles.charlie[1], 4),
      pointer_factors(config.charlie1)};
  std::array<ComplexMatrix, 4> bob;
  for (int b = 0; b < 4; ++b) {
    bob[b] = kron(kron(identity(2), bell_state(b >> 1, b & 1).matrix()), identity(2));
  }

  JointTable table;
  for (int ctx = 0; ctx < JointTable::kContexts; ++ctx) {
    const SettingContext s = JointTable::context_at(ctx);
    apply_wing(initial, alice, s.i1, s.i2, [&](const ComplexMatrix& r, int a1, int a2) {
      apply_wing(r, charlie, s.j1, s.j2, [&](const ComplexMatrix& f, int c1, int c2) {
        for (int b = 0; b < 4; ++b) {
          // Tr[P f P] = Tr[P f] for a projector P.
          const Complex p = (bob[b] * f).trace();
          table.at(ctx, JointTable::outcome_index({a1, a2, b >> 1, b & 1, c1, c2})) =
              real_probability(p);
        }
      });
    });
  }
  check_normalization(table);
  return table;
}

TripartiteDistribution marginal_tripartite(const JointTable& table, int n, int m) {
  TripartiteDistribution dist(n, m);
  for (int ctx = 0; ctx < JointTable::kContexts; ++ctx) {
    const SettingContext s = JointTable::context_at(ctx);
    const int x = n == 1 ? s.i1 : s.i2;
    const int z = m == 1 ? s.j1 : s.j2;
    for (int k = 0; k < JointTable::kOutcomes; ++k) {
      const RunOutcome o = JointTable::outcome_at(k);
      const int a = n == 1 ? o.a1 : o.a2;
      const int c = m == 1 ? o.c1 : o.c2;
      dist.at(x, z, a, o.b0, o.b1, c) += table.at(ctx, k) / 4.0;
    }
  }
  return dist;
}

nlohmann::json to_json(const JointTable& table) {
  nlohmann::json contexts = nlohmann::json::array();
  for (int ctx = 0; ctx < JointTable::kContexts; ++ctx) {
    const SettingContext s = JointTable::context_at(ctx);
    nlohmann::json probs = nlohmann::json::object();
    for (int k = 0; k < JointTable::kOutcomes; ++k) {
      const RunOutcome o = JointTable::outcome_at(k);
      std::string key;
      for (int bit : {o.a1, o.a2, o.b0, o.b1, o.c1, o.c2}) key += static_cast<char>('0' + bit);
      probs[key] = table.at(ctx, k);
    }
    contexts.push_back({{"settings", {{"i1", s.i1}, {"i2", s.i2}, {"j1", s.j1}, {"j2", s.j2}}},
                        {"probs", std::move(probs)}});
  }
  return contexts;
}

void write_csv(std::ostream& out, const JointTable& table) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "i1,i2,j1,j2,a1,a2,b0,b1,c1,c2,p\n";
  for (int ctx = 0; ctx < JointTable::kContexts; ++ctx) {
    const SettingContext s = JointTable::context_at(ctx);
    for (int k = 0; k < JointTable::kOutcomes; ++k) {
      const RunOutcome o = JointTable::outcome_at(k);
      buf << s.i1 << ',' << s.i2 << ',' << s.j1 << ',' << s.j2 << ',' << o.a1 << ','
          << o.a2 << ',' << o.b0 << ',' << o.b1 << ',' << o.c1 << ',' << o.c2 << ','
          << table.at(ctx, k) << '\n';
    }
  }
  out << buf.str();
}

}  // namespace bilocal
