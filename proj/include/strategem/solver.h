// Copyright 2026 The Strategem Authors
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

#ifndef STRATEGEM_SOLVER_H_
#define STRATEGEM_SOLVER_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "strategem/choice.h"
#include "strategem/distribution.h"
#include "strategem/error.h"
#include "strategem/game.h"

namespace strategem {

// Expected utilities within this relative gap count as tied.
inline constexpr double kTieTolerance = 1e-9;

inline bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// What a level-0 opponent of `role` does: the beauty contest midpoint, the
// maximum money request, or uniform play over the opponent's matrix actions.
inline Belief Level0Belief(const GameSpec& spec, Role role) {
  ValidateGame(spec);
  if (spec.is_bcg()) {
    return Belief::Point(0.5 * (spec.bcg().min_range + spec.bcg().max_range));
  }
  if (spec.is_mrg()) return Belief::Point(spec.mrg().max_request);
  return Belief::Uniform(Actions(spec, Opponent(role)));
}

struct BestResponse {
  std::vector<Choice> actions;  // full argmax set, in action order
  double value = 0;
};

inline BestResponse BestResponseSet(const GameSpec& spec, Role role,
                                    const Belief& belief) {
  if (spec.is_bcg()) {
    Fail(ErrorCode::kUnsupportedGame,
         "beauty contest best responses are level-k targets");
  }
  BestResponse br;
  br.value = -std::numeric_limits<double>::infinity();
  std::vector<double> eu;
  auto actions = Actions(spec, role);
  for (const auto& a : actions) eu.push_back(ExpectedUtility(spec, role, a, belief));
  for (double v : eu) br.value = std::max(br.value, v);
  for (size_t i = 0; i < actions.size(); ++i) {
    if (NearlyEqual(eu[i], br.value)) br.actions.push_back(actions[i]);
  }
  return br;
}

// One rung of a level-k ladder.
struct LevelTarget {
  int level = 0;
  // What a level-k player does. A point mass except for level-0 play in
  // matrix games, which is uniform.
  Belief prescription;
  // Opponent behaviour this level best responds to; absent at level 0.
  std::optional<Belief> conjecture;
  // Expected payoff of the prescription against the conjecture (finite games).
  std::optional<double> value;
  // Beauty contest only: the unclamped target L0 * p^k, and whether the
  // prescription had to be clamped into the interval.
  std::optional<double> raw_target;
  bool clamped = false;

  bool is_point() const { return prescription.is_point(); }
  const Choice& action() const { return prescription.support().front(); }
};

// Best-response chain seeded by level-0 play. Beauty contest targets follow
// L0 * p^k. The money request game iterates within one population. Matrix
// games alternate roles: the level-k row action answers the column player's
// level-(k-1) action and vice versa. Ties go to the lowest action.
inline std::vector<LevelTarget> LevelKChain(const GameSpec& spec, Role role,
                                            int max_k) {
  ValidateGame(spec);
  std::vector<LevelTarget> chain;
  if (max_k < 0) return chain;
  if (spec.is_bcg()) {
    const auto& g = spec.bcg();
    const double l0 = 0.5 * (g.min_range + g.max_range);
    double raw = l0;
    for (int k = 0; k <= max_k; ++k) {
      if (k > 0) raw *= g.p;
      LevelTarget t;
      t.level = k;
      t.raw_target = raw;
      double clamped = std::clamp(raw, g.min_range, g.max_range);
      t.clamped = clamped != raw;
      t.prescription = Belief::Point(clamped);
      if (k > 0) t.conjecture = chain.back().prescription;
      chain.push_back(std::move(t));
    }
    return chain;
  }

  // Plays of each role at the previous level.
  Belief own_prev = spec.is_mrg() ? Level0Belief(spec, role)
                                  : Level0Belief(spec, Opponent(role));
  Belief opp_prev = Level0Belief(spec, role);
  LevelTarget l0;
  l0.level = 0;
  l0.prescription = own_prev;
  chain.push_back(l0);
  for (int k = 1; k <= max_k; ++k) {
    auto own = BestResponseSet(spec, role, opp_prev);
    LevelTarget t;
    t.level = k;
    t.prescription = Belief::Point(own.actions.front());
    t.conjecture = opp_prev;
    t.value = own.value;
    Belief opp_next = opp_prev;
    if (spec.is_mrg()) {
      opp_next = t.prescription;
    } else {
      auto opp = BestResponseSet(spec, Opponent(role), own_prev);
      opp_next = Belief::Point(opp.actions.front());
    }
    own_prev = t.prescription;
    opp_prev = opp_next;
    chain.push_back(std::move(t));
  }
  return chain;
}

// Profiles (row action, column action) where both actions are best responses
// to each other, found by checking every cell.
inline std::vector<std::pair<Choice, Choice>> PureNash(const GameSpec& spec) {
  ValidateGame(spec);
  if (spec.is_bcg()) {
    Fail(ErrorCode::kUnsupportedGame, "pure Nash search needs a finite game");
  }
  auto rows = Actions(spec, Role::kRow), cols = Actions(spec, Role::kColumn);
  std::vector<std::pair<Choice, Choice>> out;
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < cols.size(); ++c) {
      auto [u, v] = FinitePayoff(spec, r, c);
      bool stable = true;
      for (size_t r2 = 0; r2 < rows.size() && stable; ++r2) {
        stable = FinitePayoff(spec, r2, c).first <= u;
      }
      for (size_t c2 = 0; c2 < cols.size() && stable; ++c2) {
        stable = FinitePayoff(spec, r, c2).second <= v;
      }
      if (stable) out.emplace_back(rows[r], cols[c]);
    }
  }
  return out;
}

// The point the level-k ladder contracts to, when one exists: the beauty
// contest limit 0 clamped into the interval, or the fixed point a matrix
// chain settles on.
inline Choice LimitPoint(const GameSpec& spec, Role role) {
  if (spec.is_bcg()) {
    return Choice(std::clamp(0.0, spec.bcg().min_range, spec.bcg().max_range));
  }
  if (spec.is_mrg()) {
    Fail(ErrorCode::kUnsupportedGame,
         "the money request chain cycles; it has no single limit point");
  }
  const int horizon = 4 * static_cast<int>(Actions(spec, role).size() +
                                           Actions(spec, Opponent(role)).size());
  auto chain = LevelKChain(spec, role, horizon);
  const Choice& last = chain.back().action();
  for (int k = horizon - 2; k < horizon; ++k) {
    if (!(chain[k].action() == last)) {
      Fail(ErrorCode::kUnsupportedGame,
           "the level-k chain of '" + spec.id + "' does not converge");
    }
  }
  return last;
}

// ---------------------------------------------------------------------------
// Cognitive hierarchy.

inline std::vector<double> PoissonWeights(double tau, int max_level) {
  std::vector<double> w(max_level + 1);
  // log pmf up to the shared exp(-tau) factor, which cancels on normalising.
  double log_tau = std::log(tau);
  double peak = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= max_level; ++k) {
    w[k] = k * log_tau - std::lgamma(k + 1.0);
    peak = std::max(peak, w[k]);
  }
  double total = 0;
  for (double& x : w) total += x = std::exp(x - peak);
  for (double& x : w) x /= total;
  return w;
}

struct ChPrediction {
  double tau = 1;
  int max_level = 1;
  // per_level_action[k - 1] is the level-k action for k = 1..max_level.
  std::vector<Choice> per_level_action;
  ChoiceDistribution population_distribution;
};

namespace internal {

// Mixture of `plays[0..k)` weighted by Poisson masses renormalised over 0..k-1.
inline Belief ChMixture(const std::vector<Belief>& plays,
                        const std::vector<double>& pmf, int k) {
  double total = 0;
  for (int h = 0; h < k; ++h) total += pmf[h];
  std::vector<Choice> support;
  std::vector<double> probs;
  for (int h = 0; h < k; ++h) {
    for (size_t i = 0; i < plays[h].size(); ++i) {
      const Choice& a = plays[h].support()[i];
      double m = pmf[h] / total * plays[h].probabilities()[i];
      auto it = std::find(support.begin(), support.end(), a);
      if (it == support.end()) {
        support.push_back(a);
        probs.push_back(m);
      } else {
        probs[it - support.begin()] += m;
      }
    }
  }
  double sum = 0;
  for (double p : probs) sum += p;
  for (double& p : probs) p /= sum;
  return Belief(std::move(support), std::move(probs));
}

}  // namespace internal

// Level k best responds to the Poisson(tau) mixture of levels 0..k-1, and the
// population aggregates levels 0..max_level with truncated Poisson weights.
inline ChPrediction ChPredict(const GameSpec& spec, Role role, double tau,
                              int max_level) {
  ValidateGame(spec);
  if (!(tau > 0)) Fail(ErrorCode::kInvalidSpec, "tau must be positive");
  if (max_level < 1) Fail(ErrorCode::kInvalidSpec, "max_level must be >= 1");
  ChPrediction out;
  out.tau = tau;
  out.max_level = max_level;
  std::vector<double> pmf = PoissonWeights(tau, max_level);

  std::vector<Belief> own_plays, opp_plays;
  if (spec.is_bcg()) {
    const auto& g = spec.bcg();
    std::vector<double> targets = {0.5 * (g.min_range + g.max_range)};
    for (int k = 1; k <= max_level; ++k) {
      double total = 0, mean = 0;
      for (int h = 0; h < k; ++h) total += pmf[h];
      for (int h = 0; h < k; ++h) mean += pmf[h] / total * targets[h];
      targets.push_back(std::clamp(g.p * mean, g.min_range, g.max_range));
      out.per_level_action.emplace_back(targets.back());
    }
    std::map<double, double> mass;
    for (int k = 0; k <= max_level; ++k) mass[targets[k]] += pmf[k];
    for (const auto& [x, m] : mass) {
      out.population_distribution.actions.emplace_back(x);
      out.population_distribution.mass.push_back(m);
    }
    return out;
  }

  own_plays.push_back(spec.is_mrg() ? Level0Belief(spec, role)
                                    : Level0Belief(spec, Opponent(role)));
  opp_plays.push_back(Level0Belief(spec, role));
  for (int k = 1; k <= max_level; ++k) {
    Belief about_opp = internal::ChMixture(opp_plays, pmf, k);
    auto own = BestResponseSet(spec, role, about_opp);
    out.per_level_action.push_back(own.actions.front());
    Belief own_k = Belief::Point(own.actions.front());
    Belief opp_k = own_k;
    if (!spec.is_mrg()) {
      Belief about_own = internal::ChMixture(own_plays, pmf, k);
      opp_k = Belief::Point(BestResponseSet(spec, Opponent(role), about_own).actions.front());
    }
    own_plays.push_back(own_k);
    opp_plays.push_back(opp_k);
  }
  auto actions = Actions(spec, role);
  ChoiceDistribution& pop = out.population_distribution;
  pop.actions = actions;
  pop.mass.assign(actions.size(), 0.0);
  for (int k = 0; k <= max_level; ++k) {
    for (size_t i = 0; i < actions.size(); ++i) {
      pop.mass[i] += pmf[k] * own_plays[k].ProbabilityOf(actions[i]);
    }
  }
  return out;
}

}  // namespace strategem

#endif  // STRATEGEM_SOLVER_H_
