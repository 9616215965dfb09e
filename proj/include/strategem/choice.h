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

#ifndef STRATEGEM_CHOICE_H_
#define STRATEGEM_CHOICE_H_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "strategem/error.h"

namespace strategem {

// A single action: either a number (beauty contest guesses, money requests)
// or an action label (matrix games). Numbers order before labels.
class Choice {
 public:
  Choice() : value_(0.0) {}
  Choice(double number) : value_(number) {}  // NOLINT
  Choice(int number) : value_(static_cast<double>(number)) {}  // NOLINT
  Choice(std::string label) : value_(std::move(label)) {}  // NOLINT
  Choice(const char* label) : value_(std::string(label)) {}  // NOLINT

  bool is_number() const { return std::holds_alternative<double>(value_); }
  bool is_label() const { return !is_number(); }
  double number() const { return std::get<double>(value_); }
  const std::string& label() const { return std::get<std::string>(value_); }

  // Shortest text that parses back to the same value.
  std::string ToString() const {
    if (is_label()) return label();
    return FormatNumber(number());
  }

  static std::string FormatNumber(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
  }

  // Numbers first (decimal, optional sign/exponent), then identifier-like
  // labels. Anything else is UnparseableContent.
  static Choice Parse(std::string_view text) {
    text = Trim(text);
    if (text.empty()) Fail(ErrorCode::kUnparseableContent, "empty content");
    std::string_view num = text;
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    double x = 0;
    auto res = std::from_chars(num.data(), num.data() + num.size(), x);
    if (res.ec == std::errc() && res.ptr == num.data() + num.size() &&
        std::isfinite(x)) {
      return Choice(x);
    }
    bool identifier = std::isalpha(static_cast<unsigned char>(text.front()));
    for (char c : text) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
        identifier = false;
      }
    }
    if (!identifier) {
      Fail(ErrorCode::kUnparseableContent,
           "'" + std::string(text) + "' is neither a number nor a label");
    }
    return Choice(std::string(text));
  }

  static std::string_view Trim(std::string_view s) {
    const char* ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  }

  friend bool operator==(const Choice& a, const Choice& b) = default;
  friend std::partial_ordering operator<=>(const Choice& a, const Choice& b) {
    if (a.is_number() && b.is_number()) return a.number() <=> b.number();
    if (a.is_label() && b.is_label()) return a.label() <=> b.label();
    return a.is_number() ? std::partial_ordering::less
                         : std::partial_ordering::greater;
  }

 private:
  std::variant<double, std::string> value_;
};

// Relative match for numbers (|a - b| <= tol * |b|, absolute when b == 0);
// exact equality for labels.
inline bool ChoicesMatch(const Choice& a, const Choice& b, double rel_tol) {
  if (a.is_label() || b.is_label()) return a == b;
  double diff = std::abs(a.number() - b.number());
  double scale = std::abs(b.number());
  if (scale == 0.0) return diff <= rel_tol;
  return diff <= rel_tol * scale;
}

inline constexpr double kProbabilityTolerance = 1e-12;

// Probability distribution over a finite set of an opponent's actions.
class Belief {
 public:
  Belief() = default;

  Belief(std::vector<Choice> support, std::vector<double> probabilities)
      : support_(std::move(support)), probabilities_(std::move(probabilities)) {
    if (support_.size() != probabilities_.size() || support_.empty()) {
      Fail(ErrorCode::kInvalidSpec,
           "belief support and probabilities must be nonempty and aligned");
    }
    double total = 0;
    for (double p : probabilities_) {
      if (!(p >= 0)) Fail(ErrorCode::kInvalidSpec, "negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      Fail(ErrorCode::kInvalidSpec,
           "belief probabilities sum to " + Choice::FormatNumber(total));
    }
    for (size_t i = 0; i < support_.size(); ++i) {
      for (size_t j = i + 1; j < support_.size(); ++j) {
        if (support_[i] == support_[j]) {
          Fail(ErrorCode::kInvalidSpec,
               "duplicate belief action " + support_[i].ToString());
        }
      }
    }
  }

  static Belief Point(Choice action) { return Belief({std::move(action)}, {1.0}); }

  static Belief Uniform(std::vector<Choice> actions) {
    std::vector<double> probs(actions.size(), 1.0 / actions.size());
    // Push rounding residue into the first cell so the sum test is tight.
    double rest = 0;
    for (size_t i = 1; i < probs.size(); ++i) rest += probs[i];
    if (!probs.empty()) probs[0] = 1.0 - rest;
    return Belief(std::move(actions), std::move(probs));
  }

  // Each probability is count / total, a single correctly rounded division.
  static Belief FromCounts(std::vector<Choice> actions,
                           const std::vector<double>& counts) {
    double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (!(total > 0)) Fail(ErrorCode::kInvalidSpec, "counts sum to zero");
    std::vector<double> probs;
    probs.reserve(counts.size());
    for (double c : counts) probs.push_back(c / total);
    return Belief(std::move(actions), std::move(probs));
  }

  const std::vector<Choice>& support() const { return support_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  size_t size() const { return support_.size(); }
  bool is_point() const { return support_.size() == 1; }

  double ProbabilityOf(const Choice& a) const {
    for (size_t i = 0; i < support_.size(); ++i) {
      if (support_[i] == a) return probabilities_[i];
    }
    return 0.0;
  }

  std::string ToString() const {
    if (is_point()) return support_[0].ToString();
    std::string out = "{";
    for (size_t i = 0; i < support_.size(); ++i) {
      if (i) out += ", ";
      out += support_[i].ToString() + ": " +
             Choice::FormatNumber(probabilities_[i]);
    }
    return out + "}";
  }

 private:
  std::vector<Choice> support_;
  std::vector<double> probabilities_;
};

}  // namespace strategem

#endif  // STRATEGEM_CHOICE_H_
