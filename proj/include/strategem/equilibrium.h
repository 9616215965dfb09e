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

// Symmetric mixed equilibria of symmetric two-player games by support
// enumeration. Integer payoffs are solved in exact rational arithmetic;
// anything else falls back to doubles with a 1e-9 tolerance.

#ifndef STRATEGEM_EQUILIBRIUM_H_
#define STRATEGEM_EQUILIBRIUM_H_

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "strategem/choice.h"
#include "strategem/error.h"
#include "strategem/game.h"

namespace strategem {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kEquilibriumTolerance = 1e-9;

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static bool IsZero(const Rational& x) { return x == 0; }
  static bool NonNegative(const Rational& x) { return x >= 0; }
  static bool AtMost(const Rational& x, const Rational& bound) { return x <= bound; }
  static double ToDouble(const Rational& x) { return x.convert_to<double>(); }
  static Rational FromDouble(double x) { return Rational(static_cast<long long>(x)); }
};

template <>
struct ScalarTraits<double> {
  static bool IsZero(double x) { return std::abs(x) <= 1e-12; }
  static bool NonNegative(double x) { return x >= -kEquilibriumTolerance; }
  static bool AtMost(double x, double bound) { return x <= bound + kEquilibriumTolerance; }
  static double ToDouble(double x) { return x; }
  static double FromDouble(double x) { return x; }
};

// Solves a x = b by Gaussian elimination with partial pivoting. Returns
// nullopt for singular systems.
template <typename Scalar>
std::optional<std::vector<Scalar>> SolveLinearSystem(
    std::vector<std::vector<Scalar>> a, std::vector<Scalar> b) {
  using Traits = ScalarTraits<Scalar>;
  using std::abs;
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (abs(a[r][col]) > abs(a[pivot][col])) pivot = r;
    }
    if (Traits::IsZero(a[pivot][col])) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (size_t r = col + 1; r < n; ++r) {
      if (Traits::IsZero(a[r][col])) continue;
      Scalar f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Scalar> x(n);
  for (size_t i = n; i-- > 0;) {
    Scalar s = b[i];
    for (size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

template <typename Scalar>
struct SymmetricSolution {
  std::vector<Scalar> probabilities;  // one per action, zero off support
  Scalar value;
};

// Candidate supports in enumeration order: ascending size, then lexicographic.
inline std::vector<std::vector<size_t>> SupportsInOrder(size_t n) {
  std::vector<std::vector<size_t>> out;
  for (size_t size = 1; size <= n; ++size) {
    std::vector<size_t> idx(size);
    for (size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      out.push_back(idx);
      size_t i = size;
      while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

// First symmetric equilibrium of the game whose row payoff matrix is
// `payoff` (column player's payoffs are its transpose).
template <typename Scalar>
std::optional<SymmetricSolution<Scalar>> EnumerateSymmetricSupports(
    const std::vector<std::vector<Scalar>>& payoff) {
  using Traits = ScalarTraits<Scalar>;
  const size_t n = payoff.size();
  for (const auto& support : SupportsInOrder(n)) {
    const size_t s = support.size();
    // Unknowns: probabilities on the support, then the common value.
    std::vector<std::vector<Scalar>> a(s + 1, std::vector<Scalar>(s + 1, Scalar(0)));
    std::vector<Scalar> b(s + 1, Scalar(0));
    for (size_t i = 0; i < s; ++i) {
      for (size_t j = 0; j < s; ++j) a[i][j] = payoff[support[i]][support[j]];
      a[i][s] = Scalar(-1);
    }
    for (size_t j = 0; j < s; ++j) a[s][j] = Scalar(1);
    b[s] = Scalar(1);
    auto sol = SolveLinearSystem<Scalar>(a, b);
    if (!sol) continue;
    bool ok = true;
    for (size_t j = 0; j < s && ok; ++j) ok = Traits::NonNegative((*sol)[j]);
    if (!ok) continue;
    SymmetricSolution<Scalar> out{std::vector<Scalar>(n, Scalar(0)), (*sol)[s]};
    for (size_t j = 0; j < s; ++j) {
      out.probabilities[support[j]] = Traits::NonNegative(-(*sol)[j]) ? Scalar(0) : (*sol)[j];
    }
    for (size_t i = 0; i < n && ok; ++i) {
      Scalar eu(0);
      for (size_t j = 0; j < n; ++j) eu += payoff[i][j] * out.probabilities[j];
      ok = Traits::AtMost(eu, out.value);
    }
    if (ok) return out;
  }
  return std::nullopt;
}

struct MixedEquilibrium {
  // Symmetric strategy over one player's actions (positive mass only).
  Belief distribution;
  double value = 0;
  std::vector<Choice> support;      // S+, in action order
  std::vector<Choice> off_support;  // S-
  // Exact masses over every action and exact value, when payoffs are integer.
  std::optional<std::vector<Rational>> exact_probabilities;
  std::optional<Rational> exact_value;

  bool InSupport(const Choice& a) const {
    for (const auto& s : support) {
      if (s == a) return true;
    }
    return false;
  }
};

inline bool IsSymmetricGame(const GameSpec& spec) {
  if (spec.is_mrg()) return true;
  if (!spec.is_matrix()) return false;
  const auto& m = spec.matrix();
  if (m.row_actions.size() != m.col_actions.size()) return false;
  for (size_t i = 0; i < m.payoffs.size(); ++i) {
    for (size_t j = 0; j < m.payoffs.size(); ++j) {
      if (m.payoffs[i][j].second != m.payoffs[j][i].first) return false;
    }
  }
  return true;
}

// The equilibrium strategy expressed over the column player's labels
// (symmetric games align the two action sets by index).
inline Belief AsColumnStrategy(const GameSpec& spec, const MixedEquilibrium& eq) {
  auto cols = Actions(spec, Role::kColumn);
  std::vector<Choice> support;
  for (const auto& a : eq.distribution.support()) {
    support.push_back(cols[*ActionIndex(spec, Role::kRow, a)]);
  }
  return Belief(std::move(support), eq.distribution.probabilities());
}

// Re-checks indifference on the support and no profitable deviation off it
// by direct expected-utility evaluation of every action.
inline bool VerifyMixedEquilibrium(const GameSpec& spec,
                                   const MixedEquilibrium& eq) {
  Belief opponent = AsColumnStrategy(spec, eq);
  for (const auto& a : Actions(spec, Role::kRow)) {
    double eu = ExpectedUtility(spec, Role::kRow, a, opponent);
    double tol = kEquilibriumTolerance * std::max(1.0, std::abs(eq.value));
    if (eq.InSupport(a) ? std::abs(eu - eq.value) > tol : eu > eq.value + tol) {
      return false;
    }
  }
  return true;
}

// The column player's view of a symmetric game puts the opponent on the row
// side; the solver returns the strategy in terms of row labels.
inline MixedEquilibrium SymmetricMixedNash(const GameSpec& spec) {
  ValidateGame(spec);
  if (!IsSymmetricGame(spec)) {
    Fail(ErrorCode::kAsymmetricGame,
         "'" + spec.id + "' is not symmetric (need u_col(i,j) == u_row(j,i))");
  }
  auto actions = Actions(spec, Role::kRow);
  const size_t n = actions.size();
  bool integral = true;
  std::vector<std::vector<double>> payoff(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      payoff[i][j] = FinitePayoff(spec, i, j).first;
      integral = integral && payoff[i][j] == std::floor(payoff[i][j]) &&
                 std::abs(payoff[i][j]) < 9.0e15;
    }
  }

  MixedEquilibrium eq;
  std::vector<double> probs(n);
  if (integral) {
    std::vector<std::vector<Rational>> exact(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) exact[i][j] = ScalarTraits<Rational>::FromDouble(payoff[i][j]);
    }
    auto sol = EnumerateSymmetricSupports<Rational>(exact);
    if (!sol) Fail(ErrorCode::kNoSymmetricEquilibrium, "support enumeration exhausted");
    for (size_t i = 0; i < n; ++i) probs[i] = sol->probabilities[i].convert_to<double>();
    eq.value = sol->value.convert_to<double>();
    eq.exact_probabilities = sol->probabilities;
    eq.exact_value = sol->value;
  } else {
    auto sol = EnumerateSymmetricSupports<double>(payoff);
    if (!sol) Fail(ErrorCode::kNoSymmetricEquilibrium, "support enumeration exhausted");
    probs = sol->probabilities;
    eq.value = sol->value;
  }

  std::vector<Choice> support;
  std::vector<double> mass;
  double total = 0;
  for (size_t i = 0; i < n; ++i) {
    if (probs[i] > 0) {
      support.push_back(actions[i]);
      mass.push_back(probs[i]);
      total += probs[i];
    } else {
      eq.off_support.push_back(actions[i]);
    }
  }
  for (double& m : mass) m /= total;
  eq.support = support;
  eq.distribution = Belief(std::move(support), std::move(mass));
  if (!VerifyMixedEquilibrium(spec, eq)) {
    Fail(ErrorCode::kNoSymmetricEquilibrium,
         "solution failed the post-hoc equilibrium check");
  }
  return eq;
}

}  // namespace strategem

#endif  // STRATEGEM_EQUILIBRIUM_H_
