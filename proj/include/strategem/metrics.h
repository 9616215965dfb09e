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

#ifndef STRATEGEM_METRICS_H_
#define STRATEGEM_METRICS_H_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strategem/choice.h"
#include "strategem/distribution.h"
#include "strategem/equilibrium.h"
#include "strategem/error.h"
#include "strategem/game.h"
#include "strategem/solver.h"
#include "strategem/trace.h"

namespace strategem {

inline constexpr double kDefaultEta = 0.05;
inline constexpr int kDefaultMaxLevel = 10;
// Mean first-terminal steps are capped here, and limit-point play counts as
// this many steps.
inline constexpr int kFirstTerminalCap = 10;

// ---------------------------------------------------------------------------
// Best-response regret and accuracy.

inline double BestResponseRegret(const GameSpec& spec, Role role,
                                 const Belief& belief, const Choice& action) {
  if (spec.is_bcg()) {
    Fail(ErrorCode::kUnsupportedGame,
         "beauty contest choices are scored by target deviation");
  }
  auto br = BestResponseSet(spec, role, belief);
  if (std::find(br.actions.begin(), br.actions.end(), action) != br.actions.end()) {
    return 0.0;
  }
  return std::max(0.0, br.value - ExpectedUtility(spec, role, action, belief));
}

// Relative tolerance |x - target| <= eta * |target|; when the target is 0
// the window becomes eta * (max - min) / 100 in absolute terms.
inline bool WithinTarget(const BcgSpec& g, double target, double x, double eta) {
  if (target == 0.0) return std::abs(x) <= eta * (g.max_range - g.min_range) / 100.0;
  return std::abs(x - target) <= eta * std::abs(target);
}

// |x - target| / |target|, or the absolute gap when the target is 0.
inline double TargetDeviation(double target, double x) {
  if (target == 0.0) return std::abs(x);
  return std::abs(x - target) / std::abs(target);
}

struct Tolerance {
  double epsilon = 0;        // payoff units, finite games
  double eta = kDefaultEta;  // relative, beauty contest
};

inline int BestResponseAccuracy(const GameSpec& spec, Role role,
                                const Belief& belief, const Choice& choice,
                                double epsilon = 0) {
  return BestResponseRegret(spec, role, belief, choice) <= epsilon ? 1 : 0;
}

inline int TargetAccuracy(const GameSpec& spec, double target,
                          const Choice& choice, double eta = kDefaultEta) {
  if (!spec.is_bcg()) Fail(ErrorCode::kUnsupportedGame, "target accuracy is for the beauty contest");
  if (!choice.is_number()) return 0;
  return WithinTarget(spec.bcg(), target, choice.number(), eta) ? 1 : 0;
}

// Accuracy against a rung of the level-k ladder. Finite games score the
// choice's regret against the rung's conjecture; level-0 rungs (no
// conjecture) accept any action in the level-0 prescription.
inline int Accuracy(const GameSpec& spec, Role role, const LevelTarget& target,
                    const Choice& choice, Tolerance tol = {}) {
  if (spec.is_bcg()) return TargetAccuracy(spec, target.action().number(), choice, tol.eta);
  if (!IsFeasible(spec, role, choice)) return 0;
  if (!target.conjecture) return target.prescription.ProbabilityOf(choice) > 0 ? 1 : 0;
  return BestResponseAccuracy(spec, role, *target.conjecture, choice, tol.epsilon);
}

// ---------------------------------------------------------------------------
// Level classification.

struct LevelClass {
  enum class Kind { kLevel, kLimit, kUnclassified };
  Kind kind = Kind::kUnclassified;
  int level = 0;

  static LevelClass Level(int k) { return {Kind::kLevel, k}; }
  static LevelClass Limit() { return {Kind::kLimit, 0}; }
  static LevelClass Unclassified() { return {}; }

  bool classified() const { return kind != Kind::kUnclassified; }
  bool is_limit() const { return kind == Kind::kLimit; }
  bool is_level() const { return kind == Kind::kLevel; }

  std::string ToString() const {
    switch (kind) {
      case Kind::kLevel: return "L" + std::to_string(level);
      case Kind::kLimit: return "L_inf";
      case Kind::kUnclassified: return "unclassified";
    }
    return "";
  }

  static LevelClass Parse(const std::string& s) {
    if (s == "L_inf") return Limit();
    if (s.size() > 1 && s[0] == 'L') {
      try {
        return Level(std::stoi(s.substr(1)));
      } catch (const std::exception&) {
      }
    }
    return Unclassified();
  }

  // Ordering used for modes and sorting: levels ascending, then the limit.
  int Rank() const {
    return kind == Kind::kLevel ? level : kind == Kind::kLimit ? 1 << 20 : -1;
  }

  friend bool operator==(const LevelClass&, const LevelClass&) = default;
};

// Smallest k <= max_level whose prescription matches the choice (eta-relative
// for numbers, exact for labels); otherwise the limit point if one exists and
// matches; otherwise unclassified. Level-0 uniform play matches nothing.
inline LevelClass ClassifyLevel(const GameSpec& spec, Role role,
                                const Choice& choice,
                                int max_level = kDefaultMaxLevel,
                                double eta = kDefaultEta) {
  auto chain = LevelKChain(spec, role, max_level);
  for (const auto& rung : chain) {
    if (!rung.is_point()) continue;
    if (spec.is_bcg()) {
      if (choice.is_number() &&
          WithinTarget(spec.bcg(), rung.action().number(), choice.number(), eta)) {
        return LevelClass::Level(rung.level);
      }
    } else if (rung.action() == choice) {
      return LevelClass::Level(rung.level);
    }
  }
  if (spec.is_mrg()) return LevelClass::Unclassified();
  try {
    Choice limit = LimitPoint(spec, role);
    if (spec.is_bcg()) {
      if (choice.is_number() &&
          WithinTarget(spec.bcg(), limit.number(), choice.number(), eta)) {
        return LevelClass::Limit();
      }
    } else if (limit == choice) {
      return LevelClass::Limit();
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnsupportedGame) throw;
  }
  return LevelClass::Unclassified();
}

// ---------------------------------------------------------------------------
// Cognitive hierarchy tau.

// Maximum-likelihood tau for level counts under Poisson(tau) truncated to
// 0..max_level, by grid search over 0.01..10.00 in steps of 0.01 (ties go to
// the smaller tau).
inline double EstimateTau(const std::map<int, long>& counts,
                          int max_level = kDefaultMaxLevel) {
  long n = 0;
  for (const auto& [level, count] : counts) {
    if (level < 0 || level > max_level) {
      Fail(ErrorCode::kInvalidSpec, "level " + std::to_string(level) +
                                        " outside 0.." + std::to_string(max_level));
    }
    n += count;
  }
  if (n <= 0) Fail(ErrorCode::kNoClassifiedTrials, "no classified trials");
  double best_tau = 0, best_ll = -INFINITY;
  for (int step = 1; step <= 1000; ++step) {
    double tau = step / 100.0;
    double log_tau = std::log(tau);
    double ll = 0;
    for (const auto& [level, count] : counts) {
      ll += count * (level * log_tau - std::lgamma(level + 1.0));
    }
    double z = 0, term = 1;
    for (int k = 0; k <= max_level; ++k) {
      if (k > 0) term *= tau / k;
      z += term;
    }
    ll -= n * std::log(z);
    if (ll > best_ll) {
      best_ll = ll;
      best_tau = tau;
    }
  }
  return best_tau;
}

// ---------------------------------------------------------------------------
// Depth aggregation over a run.

struct TrialDepth {
  std::optional<TracePositions> positions;  // traced trials only
  LevelClass classification;
};

struct MeanSd {
  double mean = 0;
  double sd = 0;  // sample standard deviation; 0 for fewer than two values
  long n = 0;
};

inline MeanSd ComputeMeanSd(const std::vector<double>& xs) {
  MeanSd out;
  out.n = static_cast<long>(xs.size());
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= xs.size();
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / (xs.size() - 1));
  }
  return out;
}

struct DepthEstimate {
  std::optional<LevelClass> modal_level;
  // First-terminal step per trial, capped at 10. Untraced trials use their
  // classified level (limit play counts as 10).
  MeanSd first_terminal;
  MeanSd total_steps;  // traced trials only
  std::optional<double> tau;
  std::vector<LevelClass> classifications;
  double overthinking_pct = 0;  // 100 * share of traced trials with FT < Total
  long traced = 0;

  double mean_first_terminal() const { return first_terminal.mean; }
};

inline DepthEstimate AggregateDepth(const std::vector<TrialDepth>& trials,
                                    int max_level = kDefaultMaxLevel) {
  if (trials.empty()) Fail(ErrorCode::kEmptyRun, "no trials to aggregate");
  DepthEstimate out;
  std::map<int, long> rank_counts, level_counts;
  std::vector<double> ft, total;
  long overthought = 0;
  for (const auto& t : trials) {
    out.classifications.push_back(t.classification);
    if (t.classification.classified()) {
      ++rank_counts[t.classification.Rank()];
      if (t.classification.is_level() && t.classification.level <= max_level) {
        ++level_counts[t.classification.level];
      }
    }
    if (t.positions) {
      ++out.traced;
      overthought += t.positions->overthought ? 1 : 0;
      ft.push_back(std::min<double>(t.positions->first_terminal, kFirstTerminalCap));
      total.push_back(t.positions->total_steps);
    } else if (t.classification.is_level()) {
      ft.push_back(std::min<double>(t.classification.level, kFirstTerminalCap));
    } else if (t.classification.is_limit()) {
      ft.push_back(kFirstTerminalCap);
    }
  }
  long best = 0;
  for (const auto& [rank, count] : rank_counts) {
    if (count > best) {
      best = count;
      out.modal_level = rank == (1 << 20) ? LevelClass::Limit() : LevelClass::Level(rank);
    }
  }
  out.first_terminal = ComputeMeanSd(ft);
  out.total_steps = ComputeMeanSd(total);
  if (!level_counts.empty()) out.tau = EstimateTau(level_counts, max_level);
  if (out.traced > 0) out.overthinking_pct = 100.0 * overthought / out.traced;
  return out;
}

// ---------------------------------------------------------------------------
// Equilibrium support and empirical play.

inline int SupportCoverage(const Choice& choice, const MixedEquilibrium& eq) {
  return eq.InSupport(choice) ? 1 : 0;
}

struct EmpiricalResult {
  ChoiceDistribution distribution;
  double entropy_bits = 0;
};

inline EmpiricalResult EmpiricalDistribution(const std::vector<Choice>& choices,
                                             const std::vector<Choice>& action_set) {
  if (choices.empty()) Fail(ErrorCode::kEmptyRun, "no choices");
  std::vector<double> counts(action_set.size(), 0.0);
  for (const auto& c : choices) {
    auto it = std::find(action_set.begin(), action_set.end(), c);
    if (it == action_set.end()) {
      Fail(ErrorCode::kInfeasibleAction, c.ToString() + " not in the action set");
    }
    counts[it - action_set.begin()] += 1;
  }
  EmpiricalResult out;
  out.distribution.actions = action_set;
  for (double c : counts) out.distribution.mass.push_back(c / choices.size());
  out.entropy_bits = EntropyBits(out.distribution);
  return out;
}

inline constexpr int kBcgBins = 100;

// Equal-width bins over the beauty contest interval, labelled by bin centre.
inline std::vector<Choice> BcgBinCenters(const BcgSpec& g, int bins = kBcgBins) {
  std::vector<Choice> out;
  double width = (g.max_range - g.min_range) / bins;
  for (int i = 0; i < bins; ++i) out.emplace_back(g.min_range + (i + 0.5) * width);
  return out;
}

inline Choice BcgBin(const BcgSpec& g, double x, int bins = kBcgBins) {
  double width = (g.max_range - g.min_range) / bins;
  int i = static_cast<int>(std::floor((x - g.min_range) / width));
  i = std::clamp(i, 0, bins - 1);
  return Choice(g.min_range + (i + 0.5) * width);
}

// Action set used for empirical distributions of `spec`: the finite action
// set, or beauty contest bins.
inline std::vector<Choice> DistributionActions(const GameSpec& spec, Role role) {
  if (spec.is_bcg()) return BcgBinCenters(spec.bcg());
  return Actions(spec, role);
}

inline Choice DistributionBucket(const GameSpec& spec, const Choice& c) {
  if (spec.is_bcg() && c.is_number()) return BcgBin(spec.bcg(), c.number());
  return c;
}

}  // namespace strategem

#endif  // STRATEGEM_METRICS_H_
