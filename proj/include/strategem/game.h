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

#ifndef STRATEGEM_GAME_H_
#define STRATEGEM_GAME_H_

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "strategem/choice.h"
#include "strategem/error.h"

namespace strategem {

// p-beauty contest: every participant picks a number in [min, max]; whoever
// is closest to p times the mean of all picks wins the prize (split on ties).
struct BcgSpec {
  int n_participants = 11;
  double p = 2.0 / 3.0;
  double min_range = 0;
  double max_range = 100;
  double prize = 1;
};

// 11-20 money request game: each player receives their request plus the
// bonus when the request is exactly one below the other player's.
struct MrgSpec {
  int min_request = 11;
  int max_request = 20;
  double bonus = 20;
};

// Two-player bimatrix game with labelled actions. payoffs[r][c] holds
// (row payoff, column payoff).
struct MatrixSpec {
  std::vector<std::string> row_actions;
  std::vector<std::string> col_actions;
  std::vector<std::vector<std::pair<double, double>>> payoffs;
};

enum class GameKind { kBcg, kMrg, kMatrix };

// Row is "Player 1" / "self"; column is "Player 2" / "other". The beauty
// contest and money request game treat both roles identically.
enum class Role { kRow, kColumn };

inline Role Opponent(Role role) {
  return role == Role::kRow ? Role::kColumn : Role::kRow;
}
inline std::string RoleName(Role role) {
  return role == Role::kRow ? "row" : "column";
}

struct GameSpec {
  std::string id;
  std::variant<BcgSpec, MrgSpec, MatrixSpec> game;
  Role role = Role::kRow;

  GameKind kind() const { return static_cast<GameKind>(game.index()); }
  bool is_bcg() const { return kind() == GameKind::kBcg; }
  bool is_mrg() const { return kind() == GameKind::kMrg; }
  bool is_matrix() const { return kind() == GameKind::kMatrix; }
  bool is_finite() const { return !is_bcg(); }
  const BcgSpec& bcg() const { return std::get<BcgSpec>(game); }
  const MrgSpec& mrg() const { return std::get<MrgSpec>(game); }
  const MatrixSpec& matrix() const { return std::get<MatrixSpec>(game); }
};

inline std::string GameKindName(GameKind kind) {
  switch (kind) {
    case GameKind::kBcg: return "bcg";
    case GameKind::kMrg: return "mrg";
    case GameKind::kMatrix: return "matrix";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Built-in instances.

inline GameSpec MakeBcg(BcgSpec bcg, std::string id = "bcg") {
  return GameSpec{std::move(id), std::move(bcg), Role::kRow};
}

inline GameSpec MakeMrg(MrgSpec mrg = {}, std::string id = "mrg") {
  return GameSpec{std::move(id), std::move(mrg), Role::kRow};
}

inline GameSpec MakeMatrix(MatrixSpec m, std::string id = "matrix") {
  return GameSpec{std::move(id), std::move(m), Role::kRow};
}

// The context-free 6x6 game: rows A..F, columns K..P, identical payoffs for
// both players in every cell.
inline MatrixSpec UnlabeledMatrix() {
  static constexpr int kTable[6][6] = {
      {75, 27, 96, 39, 8, 18},  {77, 56, 22, 18, 84, 30},
      {72, 63, 41, 81, 48, 77}, {73, 37, 26, 82, 24, 92},
      {45, 26, 91, 19, 85, 32}, {58, 48, 83, 67, 25, 94},
  };
  MatrixSpec m;
  m.row_actions = {"A", "B", "C", "D", "E", "F"};
  m.col_actions = {"K", "L", "M", "N", "O", "P"};
  m.payoffs.assign(6, std::vector<std::pair<double, double>>(6));
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) m.payoffs[r][c] = {kTable[r][c], kTable[r][c]};
  }
  return m;
}

inline GameSpec MakeUmg() { return MakeMatrix(UnlabeledMatrix(), "umg"); }

// ---------------------------------------------------------------------------
// Validation.

inline const GameSpec& ValidateGame(const GameSpec& spec) {
  std::vector<std::string> problems;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, BcgSpec>) {
          if (g.n_participants < 2) problems.push_back("n_participants < 2");
          if (!(g.p >= 0 && g.p < 1)) problems.push_back("p outside [0,1)");
          if (!(g.min_range < g.max_range)) {
            problems.push_back("min_range must be < max_range");
          }
          if (!(g.prize > 0)) problems.push_back("prize must be > 0");
        } else if constexpr (std::is_same_v<T, MrgSpec>) {
          if (!(g.min_request < g.max_request)) {
            problems.push_back("min_request must be < max_request");
          }
          if (!(g.bonus > g.max_request - g.min_request)) {
            problems.push_back("bonus must exceed max_request - min_request");
          }
        } else {
          if (g.row_actions.empty() || g.col_actions.empty()) {
            problems.push_back("action sets must be nonempty");
          }
          auto distinct = [&](const std::vector<std::string>& labels,
                              const char* which) {
            for (size_t i = 0; i < labels.size(); ++i) {
              for (size_t j = i + 1; j < labels.size(); ++j) {
                if (labels[i] == labels[j]) {
                  problems.push_back(std::string(which) +
                                     " has duplicate label " + labels[i]);
                }
              }
            }
          };
          distinct(g.row_actions, "row_actions");
          distinct(g.col_actions, "col_actions");
          if (g.payoffs.size() != g.row_actions.size()) {
            problems.push_back("payoffs must have one row per row action");
          }
          for (size_t r = 0; r < g.payoffs.size(); ++r) {
            if (g.payoffs[r].size() != g.col_actions.size()) {
              problems.push_back("payoffs row " + std::to_string(r) +
                                 " is not total over col_actions");
            }
            for (const auto& [a, b] : g.payoffs[r]) {
              if (!std::isfinite(a) || !std::isfinite(b)) {
                problems.push_back("non-finite payoff in row " +
                                   std::to_string(r));
              }
            }
          }
        }
      },
      spec.game);
  if (!problems.empty()) {
    std::string msg = "game '" + spec.id + "':";
    for (const auto& p : problems) msg += " " + p + ";";
    Fail(ErrorCode::kInvalidSpec, msg);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Action sets.

// The actions available to `role`. Empty for the beauty contest, whose
// action set is a continuum.
inline std::vector<Choice> Actions(const GameSpec& spec, Role role) {
  std::vector<Choice> out;
  if (spec.is_mrg()) {
    for (int a = spec.mrg().min_request; a <= spec.mrg().max_request; ++a) {
      out.emplace_back(a);
    }
  } else if (spec.is_matrix()) {
    const auto& labels = role == Role::kRow ? spec.matrix().row_actions
                                            : spec.matrix().col_actions;
    for (const auto& l : labels) out.emplace_back(l);
  }
  return out;
}

// Index of `action` in Actions(spec, role); nullopt if infeasible.
inline std::optional<size_t> ActionIndex(const GameSpec& spec, Role role,
                                         const Choice& action) {
  if (spec.is_mrg()) {
    if (!action.is_number()) return std::nullopt;
    double x = action.number();
    if (x != std::floor(x) || x < spec.mrg().min_request ||
        x > spec.mrg().max_request) {
      return std::nullopt;
    }
    return static_cast<size_t>(x - spec.mrg().min_request);
  }
  if (spec.is_matrix()) {
    if (!action.is_label()) return std::nullopt;
    const auto& labels = role == Role::kRow ? spec.matrix().row_actions
                                            : spec.matrix().col_actions;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == action.label()) return i;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

inline bool IsFeasible(const GameSpec& spec, Role role, const Choice& action) {
  if (spec.is_bcg()) {
    return action.is_number() && action.number() >= spec.bcg().min_range &&
           action.number() <= spec.bcg().max_range;
  }
  return ActionIndex(spec, role, action).has_value();
}

inline size_t RequireActionIndex(const GameSpec& spec, Role role,
                                 const Choice& action,
                                 const std::string& who) {
  auto idx = ActionIndex(spec, role, action);
  if (!idx) {
    Fail(ErrorCode::kInfeasibleAction,
         who + " action " + action.ToString() + " is not available in '" +
             spec.id + "'");
  }
  return *idx;
}

// ---------------------------------------------------------------------------
// Payoffs.

// Payoff of the row player choosing row index r against column index c (and
// the column player's payoff in .second), for the two finite games.
inline std::pair<double, double> FinitePayoff(const GameSpec& spec, size_t r,
                                              size_t c) {
  if (spec.is_mrg()) {
    const auto& g = spec.mrg();
    double a = g.min_request + static_cast<double>(r);
    double b = g.min_request + static_cast<double>(c);
    return {a + (a == b - 1 ? g.bonus : 0.0), b + (b == a - 1 ? g.bonus : 0.0)};
  }
  return spec.matrix().payoffs[r][c];
}

// Payoff to `role` when it plays own index `own` and the opponent plays `opp`.
inline double RolePayoff(const GameSpec& spec, Role role, size_t own,
                         size_t opp) {
  return role == Role::kRow ? FinitePayoff(spec, own, opp).first
                            : FinitePayoff(spec, opp, own).second;
}

// One payoff per player. Beauty contest profiles list every participant; the
// two-player games take (row, column).
inline std::vector<double> Payoffs(const GameSpec& spec,
                                   const std::vector<Choice>& profile) {
  if (spec.is_bcg()) {
    const auto& g = spec.bcg();
    if (static_cast<int>(profile.size()) != g.n_participants) {
      Fail(ErrorCode::kInfeasibleAction,
           "profile has " + std::to_string(profile.size()) +
               " choices, game has " + std::to_string(g.n_participants) +
               " participants");
    }
    double sum = 0;
    for (size_t i = 0; i < profile.size(); ++i) {
      if (!IsFeasible(spec, Role::kRow, profile[i])) {
        Fail(ErrorCode::kInfeasibleAction,
             "player " + std::to_string(i) + " action " +
                 profile[i].ToString() + " outside the interval");
      }
      sum += profile[i].number();
    }
    double target = g.p * (sum / profile.size());
    double best = INFINITY;
    for (const auto& c : profile) best = std::min(best, std::abs(c.number() - target));
    int winners = 0;
    for (const auto& c : profile) winners += std::abs(c.number() - target) == best;
    std::vector<double> out(profile.size(), 0.0);
    for (size_t i = 0; i < profile.size(); ++i) {
      if (std::abs(profile[i].number() - target) == best) out[i] = g.prize / winners;
    }
    return out;
  }
  if (profile.size() != 2) {
    Fail(ErrorCode::kInfeasibleAction, "two-player game needs two actions");
  }
  size_t r = RequireActionIndex(spec, Role::kRow, profile[0], "player 0");
  size_t c = RequireActionIndex(spec, Role::kColumn, profile[1], "player 1");
  auto [u, v] = FinitePayoff(spec, r, c);
  return {u, v};
}

inline double ExpectedUtility(const GameSpec& spec, Role role,
                              const Choice& action, const Belief& belief) {
  if (spec.is_bcg()) {
    Fail(ErrorCode::kUnsupportedGame,
         "beauty contest choices are scored by target distance, not expected "
         "utility");
  }
  size_t own = RequireActionIndex(spec, role, action, RoleName(role));
  double eu = 0;
  for (size_t i = 0; i < belief.size(); ++i) {
    size_t opp = RequireActionIndex(spec, Opponent(role), belief.support()[i],
                                    "belief");
    eu += belief.probabilities()[i] * RolePayoff(spec, role, own, opp);
  }
  return eu;
}

// Multiplies every payoff by `factor` (> 0). Used for argmax-invariance checks.
inline GameSpec ScalePayoffs(const GameSpec& spec, double factor) {
  if (!spec.is_matrix()) {
    Fail(ErrorCode::kUnsupportedGame, "only matrix payoffs can be rescaled");
  }
  GameSpec out = spec;
  auto& m = std::get<MatrixSpec>(out.game);
  for (auto& row : m.payoffs) {
    for (auto& [a, b] : row) {
      a *= factor;
      b *= factor;
    }
  }
  return out;
}

}  // namespace strategem

#endif  // STRATEGEM_GAME_H_
