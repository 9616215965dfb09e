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

// Tables over persisted runs. Every table renders as aligned text (two
// decimals) or CSV (full precision). In CSV, a "level (first terminal)" cell
// expands to <column>_level and <column>_first_terminal, and a "mean ± sd"
// cell to <column>_mean and <column>_sd. Missing cells are "-" in text and
// empty in CSV.

#ifndef STRATEGEM_REPORT_H_
#define STRATEGEM_REPORT_H_

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "strategem/distribution.h"
#include "strategem/equilibrium.h"
#include "strategem/error.h"
#include "strategem/harness.h"
#include "strategem/metrics.h"

namespace strategem {

struct Missing {
  friend bool operator==(const Missing&, const Missing&) = default;
};
struct LevelFt {
  LevelClass level;
  double first_terminal = 0;
};
struct MeanSdCell {
  double mean = 0;
  double sd = 0;
};

using Cell = std::variant<Missing, std::string, double, long, LevelFt, MeanSdCell>;

inline std::string FormatFixed(double x, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string LevelText(const LevelClass& l) {
  return l.is_limit() ? "L_∞" : l.ToString();
}

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
  std::vector<std::string> csv_names;  // overrides the derived CSV names

  void AddRow(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      Fail(ErrorCode::kInvalidSpec, "row width does not match the header");
    }
    rows.push_back(std::move(row));
  }

  std::string ToText() const {
    std::vector<std::vector<std::string>> cells;
    std::vector<bool> numeric(columns.size(), false);
    for (const auto& row : rows) {
      auto& out = cells.emplace_back();
      for (size_t c = 0; c < row.size(); ++c) {
        out.push_back(std::visit(
            [&](const auto& v) -> std::string {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, Missing>) {
                return "-";
              } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
              } else if constexpr (std::is_same_v<T, double>) {
                numeric[c] = true;
                return FormatFixed(v);
              } else if constexpr (std::is_same_v<T, long>) {
                numeric[c] = true;
                return std::to_string(v);
              } else if constexpr (std::is_same_v<T, LevelFt>) {
                return LevelText(v.level) + " (" + FormatFixed(v.first_terminal) + ")";
              } else {
                numeric[c] = true;
                return FormatFixed(v.mean) + " ± " + FormatFixed(v.sd);
              }
            },
            row[c]));
      }
    }
    auto width = [](const std::string& s) {
      size_t n = 0;
      for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
      return n;
    };
    std::vector<size_t> w(columns.size());
    for (size_t c = 0; c < columns.size(); ++c) {
      w[c] = width(columns[c]);
      for (const auto& row : cells) w[c] = std::max(w[c], width(row[c]));
    }
    auto pad = [&](const std::string& s, size_t c, bool right) {
      std::string fill(w[c] - width(s), ' ');
      return right ? fill + s : s + fill;
    };
    std::ostringstream out;
    if (!title.empty()) out << title << "\n";
    for (size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "  " : "") << pad(columns[c], c, numeric[c]);
    }
    out << "\n";
    for (size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "  " : "") << std::string(w[c], '-');
    }
    out << "\n";
    for (const auto& row : cells) {
      std::string line;
      for (size_t c = 0; c < columns.size(); ++c) {
        line += (c ? "  " : "") + pad(row[c], c, numeric[c]);
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << "\n";
    }
    for (const auto& n : notes) out << n << "\n";
    return out.str();
  }

  std::string ToCsv() const {
    // Column shapes follow the first non-missing cell of each column.
    enum Shape { kPlain, kLevel, kMeanSd };
    std::vector<Shape> shape(columns.size(), kPlain);
    for (size_t c = 0; c < columns.size(); ++c) {
      for (const auto& row : rows) {
        if (std::holds_alternative<LevelFt>(row[c])) shape[c] = kLevel;
        if (std::holds_alternative<MeanSdCell>(row[c])) shape[c] = kMeanSd;
        if (!std::holds_alternative<Missing>(row[c])) break;
      }
    }
    auto quote = [](const std::string& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return out + "\"";
    };
    std::ostringstream out;
    for (size_t c = 0; c < columns.size(); ++c) {
      auto name = csv_names.empty() ? CsvName(columns[c]) : csv_names[c];
      if (c) out << ",";
      if (shape[c] == kLevel) {
        out << name << "_level," << name << "_first_terminal";
      } else if (shape[c] == kMeanSd) {
        out << name << "_mean," << name << "_sd";
      } else {
        out << name;
      }
    }
    out << "\n";
    for (const auto& row : rows) {
      for (size_t c = 0; c < columns.size(); ++c) {
        if (c) out << ",";
        const auto& v = row[c];
        if (std::holds_alternative<Missing>(v)) {
          out << (shape[c] == kPlain ? "" : ",");
        } else if (auto* s = std::get_if<std::string>(&v)) {
          out << quote(*s);
        } else if (auto* d = std::get_if<double>(&v)) {
          out << Choice::FormatNumber(*d);
        } else if (auto* l = std::get_if<long>(&v)) {
          out << *l;
        } else if (auto* lf = std::get_if<LevelFt>(&v)) {
          out << lf->level.ToString() << "," << Choice::FormatNumber(lf->first_terminal);
        } else if (auto* ms = std::get_if<MeanSdCell>(&v)) {
          out << Choice::FormatNumber(ms->mean) << "," << Choice::FormatNumber(ms->sd);
        }
      }
      out << "\n";
    }
    return out.str();
  }

  static std::string CsvName(const std::string& header) {
    std::string out;
    for (unsigned char ch : header) {
      if (std::isalnum(ch)) {
        out += static_cast<char>(std::tolower(ch));
      } else if (ch == ' ' || ch == '_' || ch == '-') {
        if (!out.empty() && out.back() != '_') out += '_';
      } else if (ch >= 0x80) {
        continue;
      }
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "value" : out;
  }
};

enum class OutputFormat { kText, kCsv };

inline OutputFormat ParseOutputFormat(const std::string& s) {
  if (s == "text") return OutputFormat::kText;
  if (s == "csv") return OutputFormat::kCsv;
  Fail(ErrorCode::kConfigError, "unknown format '" + s + "'");
}

inline std::string Render(const Table& t, OutputFormat f) {
  return f == OutputFormat::kCsv ? t.ToCsv() : t.ToText();
}

// ---------------------------------------------------------------------------
// Shared helpers.

struct LoadedRun {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
};

inline LoadedRun OpenRun(const std::string& path) {
  auto run = LoadRun(path);
  return {run.Config(), std::move(run.records)};
}

inline std::vector<const TrialRecord*> Scored(const std::vector<TrialRecord>& records,
                                              const std::optional<Condition>& cond = std::nullopt) {
  std::vector<const TrialRecord*> out;
  for (const auto& r : records) {
    if (r.ok() && (!cond || r.condition == *cond)) out.push_back(&r);
  }
  return out;
}

inline std::optional<DepthEstimate> DepthOf(const std::vector<const TrialRecord*>& scored,
                                            int max_level) {
  if (scored.empty()) return std::nullopt;
  std::vector<TrialDepth> depth;
  for (const auto* r : scored) depth.push_back({r->positions, r->scoring->classification});
  return AggregateDepth(depth, max_level);
}

inline Cell OptCell(const std::optional<double>& x) {
  return x ? Cell(*x) : Cell(Missing{});
}

// ---------------------------------------------------------------------------
// Backtracking: modal level, tau, total steps, first terminal, overthinking.

inline Table BacktrackingTable(const std::vector<LoadedRun>& runs) {
  Table t;
  t.title = "Backtracking behaviour (traced runs)";
  t.columns = {"Model", "Run", "n", "Errors", "Modal L_k", "tau", "Total Steps",
               "First Terminal", "Overthinking %"};
  for (const auto& run : runs) {
    bool has_trace = run.config.traced;
    for (const auto& r : run.records) has_trace = has_trace || r.trace.has_value();
    if (!has_trace) {
      Fail(ErrorCode::kMissingTraces, "run '" + run.config.run_id + "' has no traces");
    }
    auto scored = Scored(run.records);
    long errors = static_cast<long>(run.records.size() - scored.size());
    std::vector<Cell> row = {run.config.model(), run.config.run_id,
                             static_cast<long>(run.records.size()), errors};
    auto d = DepthOf(scored, run.config.max_level);
    if (!d || d->traced == 0) {
      for (int i = 0; i < 5; ++i) row.push_back(Missing{});
    } else {
      row.push_back(d->modal_level ? Cell(LevelText(*d->modal_level)) : Cell(Missing{}));
      row.push_back(OptCell(d->tau));
      row.push_back(MeanSdCell{d->total_steps.mean, d->total_steps.sd});
      row.push_back(MeanSdCell{d->first_terminal.mean, d->first_terminal.sd});
      row.push_back(d->overthinking_pct);
    }
    t.AddRow(std::move(row));
  }
  t.notes.push_back("Errors are excluded from every statistic; n counts all trials.");
  return t;
}

// ---------------------------------------------------------------------------
// Opponent identity: modal level with mean first terminal per opponent type.

inline Table IdentityTable(const std::vector<LoadedRun>& runs) {
  std::vector<std::string> opponents = DefaultOpponents();
  for (const auto& run : runs) {
    for (const auto& o : run.config.opponents) {
      if (std::find(opponents.begin(), opponents.end(), o) == opponents.end()) {
        opponents.push_back(o);
      }
    }
  }
  // Row key: (model, game); cell key: opponent.
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::map<std::string, Cell>> cells;
  for (const auto& run : runs) {
    std::pair key{run.config.model(), run.config.game.id};
    if (!cells.count(key)) keys.push_back(key);
    auto& row = cells[key];
    for (const auto& cond : BuildConditions(run.config)) {
      if (!cond.opponent) continue;
      auto d = DepthOf(Scored(run.records, cond), run.config.max_level);
      if (!d || !d->modal_level || d->first_terminal.n == 0) continue;
      row[*cond.opponent] = LevelFt{*d->modal_level,
                                    std::min<double>(d->first_terminal.mean, kFirstTerminalCap)};
    }
  }
  Table t;
  t.title = "Opponent identity and implied reasoning depth";
  t.columns = {"Model", "Game"};
  for (const auto& o : opponents) t.columns.push_back(o);
  for (const auto& key : keys) {
    std::vector<Cell> row = {key.first, key.second};
    for (const auto& o : opponents) {
      auto it = cells[key].find(o);
      row.push_back(it == cells[key].end() ? Cell(Missing{}) : it->second);
    }
    t.AddRow(std::move(row));
  }
  t.notes.push_back("Cells: modal level (mean first-terminal step, capped at 10).");
  return t;
}

// ---------------------------------------------------------------------------
// Distances to reference distributions.

// CSV with a header row "action,mass"; actions absent from the file get
// mass 0. Masses are renormalized when they sum to within 1e-6 of 1.
inline ChoiceDistribution LoadReferenceCsv(const std::string& path,
                                           const std::vector<Choice>& actions) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kMissingReferenceFile, "reference file '" + path + "' not found");
  ChoiceDistribution d{actions, std::vector<double>(actions.size(), 0.0)};
  std::string line;
  bool header = true;
  long line_no = 0;
  double total = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      Fail(ErrorCode::kMismatchedSupport, path + ": line " + std::to_string(line_no) + " needs action,mass");
    }
    auto action = Choice::Parse(line.substr(0, comma));
    double mass = std::stod(line.substr(comma + 1));
    auto it = std::find(actions.begin(), actions.end(), action);
    if (it == actions.end()) {
      Fail(ErrorCode::kMismatchedSupport, path + ": action " + action.ToString() + " is not in the game");
    }
    if (mass < 0) Fail(ErrorCode::kMismatchedSupport, path + ": negative mass");
    d.mass[it - actions.begin()] += mass;
    total += mass;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    Fail(ErrorCode::kMismatchedSupport, path + ": masses sum to " + Choice::FormatNumber(total));
  }
  for (double& m : d.mass) m /= total;
  return d;
}

struct ReferenceSource {
  std::string label;  // "Nash" or the file path
  std::optional<std::string> path;

  static ReferenceSource Nash() { return {"Nash", std::nullopt}; }
  static ReferenceSource File(const std::string& path, std::string label = "") {
    return {label.empty() ? std::filesystem::path(path).stem().string() : label, path};
  }
  // "nash", or a path optionally prefixed with "label=".
  static ReferenceSource Parse(const std::string& spec) {
    if (spec == "nash" || spec == "Nash") return Nash();
    auto eq = spec.find('=');
    if (eq != std::string::npos) return File(spec.substr(eq + 1), spec.substr(0, eq));
    return File(spec);
  }
};

inline ChoiceDistribution ReferenceDistribution(const GameSpec& spec, const ReferenceSource& ref) {
  auto actions = DistributionActions(spec, spec.role);
  if (ref.path) return LoadReferenceCsv(*ref.path, actions);
  auto eq = SymmetricMixedNash(spec);
  Belief play = spec.role == Role::kRow ? eq.distribution : AsColumnStrategy(spec, eq);
  return FromBelief(actions, play);
}

inline EmpiricalResult RunDistribution(const LoadedRun& run) {
  std::vector<Choice> choices;
  for (const auto* r : Scored(run.records)) {
    choices.push_back(DistributionBucket(run.config.game, *r->choice));
  }
  return EmpiricalDistribution(choices, DistributionActions(run.config.game, run.config.game.role));
}

inline Table DistanceTable(const std::vector<LoadedRun>& runs,
                           const std::vector<ReferenceSource>& refs) {
  if (refs.empty()) Fail(ErrorCode::kConfigError, "distance table needs a reference");
  Table t;
  t.title = "Distributional distance to reference distributions";
  t.columns = {"Model", "Run", "Reference", "n", "Entropy (bits)", "KL", "TV", "l2", "EMD"};
  for (const auto& run : runs) {
    auto emp = RunDistribution(run);
    long n = static_cast<long>(Scored(run.records).size());
    for (const auto& ref : refs) {
      auto q = ReferenceDistribution(run.config.game, ref);
      std::vector<Cell> row = {run.config.model(), run.config.run_id, ref.label, n,
                               emp.entropy_bits};
      for (auto m : kAllDistanceMetrics) row.push_back(Distance(emp.distribution, q, m));
      t.AddRow(std::move(row));
    }
  }
  t.notes.push_back("KL(empirical || reference), natural log, add-1e-4 smoothing.");
  return t;
}

// ---------------------------------------------------------------------------
// Keyword classes against equilibrium support.

inline Table KeywordCrosstab(const LoadedRun& run) {
  if (!run.config.game.is_mrg()) {
    Fail(ErrorCode::kUnsupportedGame, "keyword cross-tab needs a money request game run");
  }
  auto eq = SymmetricMixedNash(run.config.game);
  std::map<Keyword, std::pair<long, long>> counts;
  for (auto k : kAllKeywords) counts[k] = {0, 0};
  long n = 0;
  for (const auto* r : Scored(run.records)) {
    ++n;
    bool in = eq.InSupport(*r->choice);
    for (auto k : TagKeywords(r->raw)) (in ? counts[k].first : counts[k].second)++;
  }
  Table t;
  t.title = "Keyword classes inside and outside the equilibrium support";
  t.columns = {"Keyword", "S+", "S-"};
  t.csv_names = {"keyword", "s_plus", "s_minus"};
  for (auto k : kAllKeywords) t.AddRow({KeywordName(k), counts[k].first, counts[k].second});
  t.notes.push_back("n = " + std::to_string(n) + " scored trials.");
  return t;
}

// ---------------------------------------------------------------------------
// Choice histogram.

inline Table Histogram(const LoadedRun& run) {
  const auto& g = run.config.game;
  auto actions = DistributionActions(g, g.role);
  std::vector<long> counts(actions.size(), 0);
  auto scored = Scored(run.records);
  for (const auto* r : scored) {
    auto b = DistributionBucket(g, *r->choice);
    auto it = std::find(actions.begin(), actions.end(), b);
    if (it != actions.end()) ++counts[it - actions.begin()];
  }
  Table t;
  t.title = "Choice histogram";
  t.columns = {"Action", "Count", "Share"};
  for (size_t i = 0; i < actions.size(); ++i) {
    double share = scored.empty() ? 0.0 : static_cast<double>(counts[i]) / scored.size();
    t.AddRow({actions[i].ToString(), counts[i], share});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Long-format metrics export: one row per (run, condition, metric).

inline Table MetricsTable(const std::vector<LoadedRun>& runs) {
  Table t;
  t.columns = {"run_id", "model", "game", "variant", "condition", "metric", "value"};
  for (const auto& run : runs) {
    const auto& c = run.config;
    auto summary = SummarizeRun(c, run.records);
    auto eq = RunEquilibrium(c.game);
    auto add = [&](const std::string& cond, const std::string& metric, Cell value) {
      t.AddRow({c.run_id, c.model(), c.game.id, PromptVariantName(c.variant), cond, metric,
                std::move(value)});
    };
    for (const auto& cell : summary.cells) {
      const auto& label = cell.condition.label;
      add(label, "n", cell.n);
      add(label, "scored", cell.scored);
      add(label, "errors", cell.errors);
      add(label, "error_rate", cell.n ? static_cast<double>(cell.errors) / cell.n : 0.0);
      auto opt = [&](const char* name, const std::optional<double>& v) {
        if (v) add(label, name, *v);
      };
      opt("accuracy", cell.accuracy);
      opt("accuracy_scored_only", cell.accuracy_scored_only);
      opt("mean_regret", cell.mean_regret);
      opt("max_regret", cell.max_regret);
      opt("mean_target_deviation", cell.mean_target_deviation);
      opt("max_target_deviation", cell.max_target_deviation);
      opt("support_coverage", cell.support_coverage);
      if (cell.depth) {
        const auto& d = *cell.depth;
        if (d.modal_level) add(label, "modal_level", d.modal_level->ToString());
        opt("tau", d.tau);
        if (d.first_terminal.n > 0) {
          add(label, "first_terminal_mean", d.first_terminal.mean);
          add(label, "first_terminal_sd", d.first_terminal.sd);
        }
        if (d.traced > 0) {
          add(label, "total_steps_mean", d.total_steps.mean);
          add(label, "total_steps_sd", d.total_steps.sd);
          add(label, "overthinking_pct", d.overthinking_pct);
        }
      }
      auto scored = Scored(run.records, cell.condition);
      if (!scored.empty()) {
        std::vector<Choice> choices;
        for (const auto* r : scored) choices.push_back(DistributionBucket(c.game, *r->choice));
        auto emp = EmpiricalDistribution(choices, DistributionActions(c.game, c.game.role));
        add(label, "entropy_bits", emp.entropy_bits);
        if (eq) {
          auto q = ReferenceDistribution(c.game, ReferenceSource::Nash());
          for (auto m : kAllDistanceMetrics) {
            add(label, DistanceMetricName(m) + "_to_nash", Distance(emp.distribution, q, m));
          }
        }
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Solver report.

// "uniform" for equal-mass beliefs over two or more actions.
inline std::string BeliefText(const Belief& b) {
  if (b.is_point()) return b.ToString();
  for (double p : b.probabilities()) {
    if (std::abs(p - 1.0 / b.size()) > 1e-12) return b.ToString();
  }
  std::string out = "uniform{";
  for (size_t i = 0; i < b.size(); ++i) out += (i ? "," : "") + b.support()[i].ToString();
  return out + "}";
}

inline Table ChainTable(const GameSpec& spec, Role role, int max_k) {
  Table t;
  t.title = "Level-k chain (" + RoleName(role) + ")";
  t.columns = {"k", "Prescription", "Conjecture", "Value"};
  for (const auto& rung : LevelKChain(spec, role, max_k)) {
    std::vector<Cell> row = {static_cast<long>(rung.level), BeliefText(rung.prescription),
                             rung.conjecture ? Cell(BeliefText(*rung.conjecture)) : Cell(Missing{}),
                             OptCell(rung.value)};
    if (spec.is_bcg() && rung.clamped) std::get<std::string>(row[1]) += " (clamped)";
    t.AddRow(std::move(row));
  }
  return t;
}

inline std::string SolveReport(const GameSpec& spec, int max_k, OutputFormat format) {
  std::ostringstream out;
  auto emit = [&](const Table& t) {
    if (format == OutputFormat::kCsv) {
      out << "# " << t.title << "\n" << t.ToCsv();
    } else {
      out << t.ToText();
    }
    out << "\n";
  };
  std::vector<Role> roles = {Role::kRow};
  if (spec.is_matrix()) roles.push_back(Role::kColumn);
  for (auto role : roles) emit(ChainTable(spec, role, max_k));

  if (spec.is_bcg()) {
    Table t;
    t.title = "Limit point";
    t.columns = {"Action"};
    t.AddRow({LimitPoint(spec, Role::kRow).ToString()});
    emit(t);
    return out.str();
  }
  Table pure;
  pure.title = "Pure Nash equilibria";
  pure.columns = {"Row", "Column"};
  for (const auto& [r, c] : PureNash(spec)) pure.AddRow({r.ToString(), c.ToString()});
  if (pure.rows.empty()) pure.notes.push_back("none");
  emit(pure);

  Table mixed;
  mixed.title = "Symmetric mixed equilibrium";
  mixed.columns = {"Action", "Probability", "Exact"};
  try {
    auto eq = SymmetricMixedNash(spec);
    auto actions = Actions(spec, Role::kRow);
    for (size_t i = 0; i < actions.size(); ++i) {
      Cell exact = Missing{};
      if (eq.exact_probabilities) exact = (*eq.exact_probabilities)[i].str();
      mixed.AddRow({actions[i].ToString(), eq.distribution.ProbabilityOf(actions[i]), exact});
    }
    mixed.notes.push_back("value = " + Choice::FormatNumber(eq.value) +
                          (eq.exact_value ? " (" + eq.exact_value->str() + ")" : ""));
  } catch (const Error& e) {
    mixed.notes.push_back(std::string("none: ") + e.what());
  }
  emit(mixed);
  return out.str();
}

}  // namespace strategem

#endif  // STRATEGEM_REPORT_H_
