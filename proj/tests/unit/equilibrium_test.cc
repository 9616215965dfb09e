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


#include <random>

#include "test_util.h"

namespace strategem {
namespace {

using testing::SymmetricMatrix;

// Determinant by cofactor expansion; sizes here are at most 5.
double Det(const std::vector<std::vector<double>>& m) {
  const size_t n = m.size();
  if (n == 1) return m[0][0];
  double d = 0;
  for (size_t c = 0; c < n; ++c) {
    std::vector<std::vector<double>> minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(row);
    }
    d += (c % 2 ? -1.0 : 1.0) * m[0][c] * Det(minor);
  }
  return d;
}

// First symmetric equilibrium by support size then lexicographic order,
// solving each indifference system with Cramer's rule.
std::optional<std::vector<double>> VertexOracle(const std::vector<std::vector<double>>& u) {
  const size_t n = u.size();
  for (size_t size = 1; size <= n; ++size) {
    std::vector<std::vector<size_t>> supports;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<size_t>(__builtin_popcount(mask)) != size) continue;
      std::vector<size_t> s;
      for (size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(i);
      }
      supports.push_back(s);
    }
    std::sort(supports.begin(), supports.end());
    for (const auto& s : supports) {
      const size_t k = s.size();
      std::vector<std::vector<double>> a(k + 1, std::vector<double>(k + 1, 0));
      std::vector<double> b(k + 1, 0);
      for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) a[i][j] = u[s[i]][s[j]];
        a[i][k] = -1;
        a[k][i] = 1;
      }
      b[k] = 1;
      double det = Det(a);
      if (std::abs(det) < 1e-12) continue;
      std::vector<double> x(k + 1);
      for (size_t c = 0; c <= k; ++c) {
        auto ac = a;
        for (size_t r = 0; r <= k; ++r) ac[r][c] = b[r];
        x[c] = Det(ac) / det;
      }
      bool ok = true;
      for (size_t i = 0; i < k; ++i) ok = ok && x[i] >= -1e-9;
      std::vector<double> p(n, 0);
      for (size_t i = 0; i < k; ++i) p[s[i]] = std::max(0.0, x[i]);
      for (size_t i = 0; i < n && ok; ++i) {
        double eu = 0;
        for (size_t j = 0; j < n; ++j) eu += u[i][j] * p[j];
        ok = eu <= x[k] + 1e-9;
      }
      if (ok) return p;
    }
  }
  return std::nullopt;
}

TEST(SymmetricMixedNashTest, MoneyRequestExact) {
  auto eq = SymmetricMixedNash(MakeMrg());
  EXPECT_EQ(eq.support, (std::vector<Choice>{15, 16, 17, 18, 19, 20}));
  EXPECT_EQ(eq.off_support, (std::vector<Choice>{11, 12, 13, 14}));
  ASSERT_TRUE(eq.exact_probabilities.has_value());
  const auto& p = *eq.exact_probabilities;
  std::vector<Rational> expected = {0, 0, 0, 0, Rational(1, 4), Rational(1, 4),
                                    Rational(1, 5), Rational(3, 20), Rational(1, 10),
                                    Rational(1, 20)};
  EXPECT_EQ(p, expected);
  EXPECT_EQ(*eq.exact_value, Rational(20));
  EXPECT_EQ(eq.value, 20);
  for (int a = 11; a <= 20; ++a) {
    double eu = ExpectedUtility(MakeMrg(), Role::kRow, a, eq.distribution);
    if (a >= 15) {
      EXPECT_NEAR(eu, 20, 1e-12) << a;
    } else {
      EXPECT_LT(eu, 20) << a;
    }
  }
}

TEST(SymmetricMixedNashTest, AntiCoordination) {
  auto eq = SymmetricMixedNash(SymmetricMatrix({{0, 1}, {1, 0}}));
  EXPECT_EQ(*eq.exact_value, Rational(1, 2));
  EXPECT_EQ(eq.distribution.probabilities(), (std::vector<double>{0.5, 0.5}));
}

TEST(SymmetricMixedNashTest, DominantActionIsPointMass) {
  auto eq = SymmetricMixedNash(SymmetricMatrix({{3, 0}, {5, 1}}, {"C", "D"}));
  EXPECT_TRUE(eq.distribution.is_point());
  EXPECT_EQ(eq.support, std::vector<Choice>{"D"});
  EXPECT_EQ(eq.value, 1);
}

TEST(SymmetricMixedNashTest, RockPaperScissors) {
  auto eq = SymmetricMixedNash(SymmetricMatrix({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}}));
  for (const auto& p : *eq.exact_probabilities) EXPECT_EQ(p, Rational(1, 3));
  EXPECT_EQ(*eq.exact_value, Rational(0));
}

TEST(SymmetricMixedNashTest, FractionalPayoffsUseFloatingPoint) {
  auto eq = SymmetricMixedNash(SymmetricMatrix({{0, 0.5}, {0.5, 0}}));
  EXPECT_FALSE(eq.exact_probabilities.has_value());
  EXPECT_NEAR(eq.value, 0.25, 1e-12);
  EXPECT_NEAR(eq.distribution.probabilities()[0], 0.5, 1e-12);
}

TEST(SymmetricMixedNashTest, PrefersSmallestSupport) {
  // Coordination game: pure equilibria on both actions and a mixed one.
  auto eq = SymmetricMixedNash(SymmetricMatrix({{2, 0}, {0, 1}}));
  EXPECT_EQ(eq.support, std::vector<Choice>{"a"});
}

TEST(SymmetricMixedNashTest, RejectsAsymmetricGames) {
  EXPECT_STRATEGEM_ERROR(SymmetricMixedNash(MakeUmg()), ErrorCode::kAsymmetricGame);
  MatrixSpec m{{"a", "b"}, {"x"}, {{{1, 1}}, {{2, 2}}}};
  EXPECT_STRATEGEM_ERROR(SymmetricMixedNash(MakeMatrix(m)), ErrorCode::kAsymmetricGame);
  EXPECT_FALSE(IsSymmetricGame(testing::BcgP23()));
}

TEST(SymmetricMixedNashTest, AgreesWithVertexOracle) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> payoff(-5, 9);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    size_t n = 2 + trial % 3;
    std::vector<std::vector<double>> u(n, std::vector<double>(n));
    for (auto& row : u) {
      for (double& x : row) x = payoff(rng);
    }
    auto oracle = VertexOracle(u);
    if (!oracle) continue;
    auto eq = SymmetricMixedNash(SymmetricMatrix(u));
    ASSERT_TRUE(eq.exact_probabilities.has_value());
    for (size_t i = 0; i < n; ++i) {
      EXPECT_NEAR((*eq.exact_probabilities)[i].convert_to<double>(), (*oracle)[i], 1e-9)
          << "trial " << trial;
    }
    EXPECT_TRUE(VerifyMixedEquilibrium(SymmetricMatrix(u), eq));
    ++compared;
  }
  EXPECT_GT(compared, 250);
}

TEST(SymmetricMixedNashTest, ScaleInvariantSupport) {
  GameSpec g = SymmetricMatrix({{0, 3, 1}, {2, 0, 2}, {1, 2, 0}});
  auto base = SymmetricMixedNash(g);
  auto scaled = SymmetricMixedNash(ScalePayoffs(g, 7));
  EXPECT_EQ(base.support, scaled.support);
  EXPECT_EQ(*base.exact_probabilities, *scaled.exact_probabilities);
  EXPECT_EQ(*scaled.exact_value, *base.exact_value * 7);
}

TEST(SupportsInOrderTest, SizeThenLexicographic) {
  auto s = SupportsInOrder(3);
  std::vector<std::vector<size_t>> expected = {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
  EXPECT_EQ(s, expected);
  EXPECT_EQ(SupportsInOrder(10).size(), 1023u);
}

}  // namespace
}  // namespace strategem
