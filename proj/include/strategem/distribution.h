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

#ifndef STRATEGEM_DISTRIBUTION_H_
#define STRATEGEM_DISTRIBUTION_H_

#include <cmath>
#include <string>
#include <vector>

#include "strategem/choice.h"
#include "strategem/error.h"

namespace strategem {

// Distribution over an ordered finite action set (numeric ascending or label
// order). Used for empirical play, equilibrium references and CH predictions.
struct ChoiceDistribution {
  std::vector<Choice> actions;
  std::vector<double> mass;

  size_t size() const { return actions.size(); }

  double MassOf(const Choice& a) const {
    for (size_t i = 0; i < actions.size(); ++i) {
      if (actions[i] == a) return mass[i];
    }
    return 0.0;
  }

  void Validate() const {
    if (actions.size() != mass.size() || actions.empty()) {
      Fail(ErrorCode::kInvalidSpec, "distribution actions and mass misaligned");
    }
    double total = 0;
    for (double m : mass) {
      if (!(m >= 0)) Fail(ErrorCode::kInvalidSpec, "negative mass");
      total += m;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      Fail(ErrorCode::kInvalidSpec,
           "distribution mass sums to " + Choice::FormatNumber(total));
    }
  }

  Belief ToBelief() const {
    std::vector<Choice> s;
    std::vector<double> p;
    for (size_t i = 0; i < actions.size(); ++i) {
      if (mass[i] > 0) {
        s.push_back(actions[i]);
        p.push_back(mass[i]);
      }
    }
    return Belief(std::move(s), std::move(p));
  }
};

// A distribution over `actions` that agrees with `belief` and is zero
// elsewhere.
inline ChoiceDistribution FromBelief(const std::vector<Choice>& actions,
                                     const Belief& belief) {
  ChoiceDistribution d{actions, std::vector<double>(actions.size(), 0.0)};
  for (size_t i = 0; i < actions.size(); ++i) d.mass[i] = belief.ProbabilityOf(actions[i]);
  return d;
}

inline ChoiceDistribution PointDistribution(const std::vector<Choice>& actions,
                                            const Choice& at) {
  return FromBelief(actions, Belief::Point(at));
}

// Shannon entropy in bits.
inline double EntropyBits(const ChoiceDistribution& d) {
  double h = 0;
  for (double m : d.mass) {
    if (m > 0) h -= m * std::log2(m);
  }
  return h + 0.0;  // normalizes -0.0
}

enum class DistanceMetric { kKl, kTv, kL2, kEmd };

inline std::string DistanceMetricName(DistanceMetric m) {
  switch (m) {
    case DistanceMetric::kKl: return "KL";
    case DistanceMetric::kTv: return "TV";
    case DistanceMetric::kL2: return "L2";
    case DistanceMetric::kEmd: return "EMD";
  }
  return "?";
}

inline constexpr DistanceMetric kAllDistanceMetrics[] = {
    DistanceMetric::kKl, DistanceMetric::kTv, DistanceMetric::kL2,
    DistanceMetric::kEmd};

// Per-bin pseudo-mass added to both arguments of KL before renormalising.
inline constexpr double kKlSmoothing = 1e-4;

namespace internal {
inline std::vector<double> Smoothed(const std::vector<double>& m) {
  std::vector<double> out(m.size());
  double total = 0;
  for (size_t i = 0; i < m.size(); ++i) total += out[i] = m[i] + kKlSmoothing;
  for (double& x : out) x /= total;
  return out;
}
}  // namespace internal

// KL uses natural logarithms. EMD assumes unit spacing between adjacent
// actions in the shared ordering.
inline double Distance(const ChoiceDistribution& p, const ChoiceDistribution& q,
                       DistanceMetric metric) {
  if (p.actions != q.actions || p.mass.size() != q.mass.size()) {
    Fail(ErrorCode::kMismatchedSupport,
         "distributions must share an identically ordered action set");
  }
  const size_t n = p.size();
  switch (metric) {
    case DistanceMetric::kKl: {
      auto ps = internal::Smoothed(p.mass), qs = internal::Smoothed(q.mass);
      double kl = 0;
      for (size_t i = 0; i < n; ++i) kl += ps[i] * std::log(ps[i] / qs[i]);
      return std::max(0.0, kl);
    }
    case DistanceMetric::kTv: {
      double tv = 0;
      for (size_t i = 0; i < n; ++i) tv += std::abs(p.mass[i] - q.mass[i]);
      return 0.5 * tv;
    }
    case DistanceMetric::kL2: {
      double ss = 0;
      for (size_t i = 0; i < n; ++i) ss += (p.mass[i] - q.mass[i]) * (p.mass[i] - q.mass[i]);
      return std::sqrt(ss);
    }
    case DistanceMetric::kEmd: {
      double cum = 0, emd = 0;
      for (size_t i = 0; i < n; ++i) {
        cum += p.mass[i] - q.mass[i];
        emd += std::abs(cum);
      }
      return emd;
    }
  }
  return 0;
}

}  // namespace strategem

#endif  // STRATEGEM_DISTRIBUTION_H_
