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

// Game specs as YAML tables, and matrix payoffs as CSV.
//
//   game:
//     id: pbcg
//     type: bcg            # bcg | mrg | matrix
//     n_participants: 11
//     p: 0.9               # or a fraction string such as "2/3"
//     min_range: 1250
//     max_range: 8761
//
//   game: {id: umg, type: matrix, builtin: umg}
//   game: {id: g, type: matrix, csv: payoffs.csv}
//   game:
//     type: matrix
//     row_actions: [X, Y]
//     col_actions: [X, Y]
//     payoffs: [[[0, 0], [1, 1]], [[1, 1], [0, 0]]]   # [row][col] = [u_row, u_col]
//
// CSV layout: the first row holds an empty corner cell followed by column
// labels; each later row holds a row label followed by one cell per column.
// A cell is either a single number (both players receive it) or "u_row;u_col".

#ifndef STRATEGEM_GAME_IO_H_
#define STRATEGEM_GAME_IO_H_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "strategem/error.h"
#include "strategem/game.h"

namespace strategem {

namespace internal {

inline double ParseNumberOrFraction(const std::string& text,
                                    const std::string& field) {
  std::string s(Choice::Trim(text));
  auto slash = s.find('/');
  try {
    size_t used = 0;
    if (slash == std::string::npos) {
      double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } else {
      std::string a = s.substr(0, slash), b = s.substr(slash + 1);
      size_t ua = 0, ub = 0;
      double num = std::stod(a, &ua), den = std::stod(b, &ub);
      if (ua == a.size() && ub == b.size() && den != 0) return num / den;
    }
  } catch (const std::exception&) {
  }
  Fail(ErrorCode::kInvalidSpec, "field '" + field + "': cannot parse '" + s + "'");
}

inline std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.emplace_back(Choice::Trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T Get(const YAML::Node& node, const char* key, T fallback) {
  if (!node[key]) return fallback;
  try {
    return node[key].as<T>();
  } catch (const YAML::Exception& e) {
    Fail(ErrorCode::kInvalidSpec, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace internal

inline MatrixSpec ParseMatrixCsv(std::istream& in) {
  MatrixSpec m;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Choice::Trim(line).empty()) continue;
    auto cells = internal::SplitCsvLine(line);
    if (header) {
      if (cells.size() < 2) Fail(ErrorCode::kInvalidSpec, "CSV header needs labels");
      m.col_actions.assign(cells.begin() + 1, cells.end());
      header = false;
      continue;
    }
    if (cells.size() != m.col_actions.size() + 1) {
      Fail(ErrorCode::kInvalidSpec, "CSV row '" + cells[0] + "' has " +
                                        std::to_string(cells.size() - 1) +
                                        " cells, expected " +
                                        std::to_string(m.col_actions.size()));
    }
    m.row_actions.push_back(cells[0]);
    auto& row = m.payoffs.emplace_back();
    for (size_t c = 1; c < cells.size(); ++c) {
      auto semi = cells[c].find(';');
      std::string field = "cell " + cells[0] + "/" + m.col_actions[c - 1];
      if (semi == std::string::npos) {
        double v = internal::ParseNumberOrFraction(cells[c], field);
        row.emplace_back(v, v);
      } else {
        row.emplace_back(
            internal::ParseNumberOrFraction(cells[c].substr(0, semi), field),
            internal::ParseNumberOrFraction(cells[c].substr(semi + 1), field));
      }
    }
  }
  if (header) Fail(ErrorCode::kInvalidSpec, "empty CSV matrix");
  return m;
}

inline MatrixSpec LoadMatrixCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kInvalidSpec, "cannot open matrix CSV " + path);
  return ParseMatrixCsv(in);
}

inline std::string MatrixToCsv(const MatrixSpec& m) {
  std::string out;
  for (const auto& c : m.col_actions) out += "," + c;
  out += "\n";
  for (size_t r = 0; r < m.row_actions.size(); ++r) {
    out += m.row_actions[r];
    for (const auto& [a, b] : m.payoffs[r]) {
      out += "," + Choice::FormatNumber(a);
      if (a != b) out += ";" + Choice::FormatNumber(b);
    }
    out += "\n";
  }
  return out;
}

// `base_dir` resolves relative CSV paths.
inline GameSpec GameFromYaml(const YAML::Node& node,
                             const std::string& base_dir = "") {
  if (!node || !node.IsMap()) Fail(ErrorCode::kInvalidSpec, "game must be a table");
  GameSpec spec;
  auto type = internal::Get<std::string>(node, "type", "");
  spec.id = internal::Get<std::string>(node, "id", type);
  auto role = internal::Get<std::string>(node, "role", "row");
  if (role == "row" || role == "self") {
    spec.role = Role::kRow;
  } else if (role == "column" || role == "other") {
    spec.role = Role::kColumn;
  } else {
    Fail(ErrorCode::kInvalidSpec, "unknown role '" + role + "'");
  }
  if (type == "bcg") {
    BcgSpec g;
    g.n_participants = internal::Get<int>(node, "n_participants", g.n_participants);
    if (node["p"]) g.p = internal::ParseNumberOrFraction(node["p"].as<std::string>(), "p");
    g.min_range = internal::Get<double>(node, "min_range", g.min_range);
    g.max_range = internal::Get<double>(node, "max_range", g.max_range);
    g.prize = internal::Get<double>(node, "prize", g.prize);
    spec.game = g;
  } else if (type == "mrg") {
    MrgSpec g;
    g.min_request = internal::Get<int>(node, "min_request", g.min_request);
    g.max_request = internal::Get<int>(node, "max_request", g.max_request);
    g.bonus = internal::Get<double>(node, "bonus", g.bonus);
    spec.game = g;
  } else if (type == "matrix") {
    auto builtin = internal::Get<std::string>(node, "builtin", "");
    if (builtin == "umg") {
      spec.game = UnlabeledMatrix();
    } else if (!builtin.empty()) {
      Fail(ErrorCode::kInvalidSpec, "unknown builtin matrix '" + builtin + "'");
    } else if (node["csv"]) {
      auto path = node["csv"].as<std::string>();
      if (!base_dir.empty() && !path.empty() && path[0] != '/') {
        path = base_dir + "/" + path;
      }
      spec.game = LoadMatrixCsv(path);
    } else {
      MatrixSpec m;
      try {
        m.row_actions = node["row_actions"].as<std::vector<std::string>>();
        m.col_actions = node["col_actions"].as<std::vector<std::string>>();
        for (const auto& row : node["payoffs"]) {
          auto& out = m.payoffs.emplace_back();
          for (const auto& cell : row) {
            if (cell.IsSequence()) {
              out.emplace_back(cell[0].as<double>(), cell[1].as<double>());
            } else {
              out.emplace_back(cell.as<double>(), cell.as<double>());
            }
          }
        }
      } catch (const YAML::Exception& e) {
        Fail(ErrorCode::kInvalidSpec, std::string("matrix: ") + e.what());
      }
      spec.game = m;
    }
  } else {
    Fail(ErrorCode::kInvalidSpec, "unknown game type '" + type + "'");
  }
  ValidateGame(spec);
  return spec;
}

inline YAML::Node GameToYaml(const GameSpec& spec) {
  YAML::Node node;
  node["id"] = spec.id;
  node["type"] = GameKindName(spec.kind());
  node["role"] = RoleName(spec.role);
  if (spec.is_bcg()) {
    const auto& g = spec.bcg();
    node["n_participants"] = g.n_participants;
    node["p"] = Choice::FormatNumber(g.p);
    node["min_range"] = g.min_range;
    node["max_range"] = g.max_range;
    node["prize"] = g.prize;
  } else if (spec.is_mrg()) {
    const auto& g = spec.mrg();
    node["min_request"] = g.min_request;
    node["max_request"] = g.max_request;
    node["bonus"] = g.bonus;
  } else {
    const auto& m = spec.matrix();
    node["row_actions"] = m.row_actions;
    node["col_actions"] = m.col_actions;
    YAML::Node rows;
    for (const auto& row : m.payoffs) {
      YAML::Node r;
      for (const auto& [a, b] : row) {
        YAML::Node cell;
        cell.push_back(a);
        cell.push_back(b);
        cell.SetStyle(YAML::EmitterStyle::Flow);
        r.push_back(cell);
      }
      r.SetStyle(YAML::EmitterStyle::Flow);
      rows.push_back(r);
    }
    node["payoffs"] = rows;
  }
  return node;
}

inline GameSpec LoadGameFile(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    Fail(ErrorCode::kInvalidSpec, "cannot read " + path + ": " + e.what());
  }
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? "" : path.substr(0, slash);
  return GameFromYaml(root["game"] ? root["game"] : root, base);
}

}  // namespace strategem

#endif  // STRATEGEM_GAME_IO_H_
