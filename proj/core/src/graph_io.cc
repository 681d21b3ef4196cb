// Copyright 2026 The gpflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gpflow/graph_io.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "gpflow/errors.h"
#include "json.hpp"

namespace gpflow {

namespace {

[[noreturn]] void Fail(int line, const std::string& what) {
  throw InfeasibleInput("line " + std::to_string(line) + ": " + what);
}

int ParseVertex(std::istringstream& ss, int n, int line) {
  long long id;
  if (!(ss >> id)) Fail(line, "expected a vertex id");
  if (id < 1 || id > n) Fail(line, "vertex id out of range");
  return static_cast<int>(id - 1);
}

double ParseNumber(std::istringstream& ss, int line, const char* what) {
  std::string tok;
  if (!(ss >> tok)) Fail(line, std::string("expected ") + what);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    Fail(line, std::string("malformed ") + what);
  }
  if (used != tok.size() || !std::isfinite(v)) {
    Fail(line, std::string("malformed ") + what);
  }
  return v;
}

void ExpectEnd(std::istringstream& ss, int line) {
  std::string extra;
  if (ss >> extra) Fail(line, "trailing tokens");
}

}  // namespace

FlowInstance ParseDimacs(std::istream& in) {
  int n = -1;
  long long m = -1;
  std::vector<Edge> edges;
  Vec demands;
  std::vector<char> demand_seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ss(raw);
    std::string kind;
    if (!(ss >> kind) || kind == "c") continue;
    if (kind == "p") {
      if (n >= 0) Fail(line, "duplicate problem line");
      std::string type;
      if (!(ss >> type) || type != "min") Fail(line, "expected 'p min n m'");
      long long nn;
      if (!(ss >> nn >> m) || nn < 1 || m < 0 || nn > 100000000) {
        Fail(line, "bad problem size");
      }
      ExpectEnd(ss, line);
      n = static_cast<int>(nn);
      demands.assign(n, 0.0);
      demand_seen.assign(n, 0);
      edges.reserve(static_cast<std::size_t>(m));
    } else if (kind == "n") {
      if (n < 0) Fail(line, "node line before problem line");
      const int v = ParseVertex(ss, n, line);
      const double d = ParseNumber(ss, line, "demand");
      ExpectEnd(ss, line);
      if (demand_seen[v]) Fail(line, "duplicate node line");
      demand_seen[v] = 1;
      demands[v] = d;
    } else if (kind == "a") {
      if (n < 0) Fail(line, "arc line before problem line");
      Edge e;
      e.tail = ParseVertex(ss, n, line);
      e.head = ParseVertex(ss, n, line);
      e.length = ParseNumber(ss, line, "length");
      ExpectEnd(ss, line);
      if (e.tail == e.head) Fail(line, "self-loop");
      if (!(e.length > 0.0)) Fail(line, "non-positive length");
      edges.push_back(e);
    } else {
      Fail(line, "unknown line type '" + kind + "'");
    }
  }
  if (n < 0) throw InfeasibleInput("missing problem line");
  if (static_cast<long long>(edges.size()) != m) {
    throw InfeasibleInput("arc count does not match problem line");
  }
  FlowInstance inst{LengthGraph(n, std::move(edges)), std::move(demands)};
  CheckDemand(inst.graph, inst.demands);
  return inst;
}

FlowInstance ReadDimacsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InfeasibleInput("cannot open graph file " + path);
  return ParseDimacs(in);
}

Vec ParseDemandsJson(std::istream& in, int num_vertices) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InfeasibleInput(std::string("demand JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InfeasibleInput("demand JSON must be an object");
  Vec b(num_vertices, 0.0);
  for (const auto& [key, value] : doc.items()) {
    std::size_t used = 0;
    long long id = 0;
    try {
      id = std::stoll(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || id < 1 || id > num_vertices) {
      throw InfeasibleInput("demand JSON: bad vertex id '" + key + "'");
    }
    if (!value.is_number()) {
      throw InfeasibleInput("demand JSON: value for '" + key + "' not a number");
    }
    b[id - 1] = value.get<double>();
  }
  return b;
}

Vec ReadDemandsFile(const std::string& path, int num_vertices) {
  std::ifstream in(path);
  if (!in) throw InfeasibleInput("cannot open demand file " + path);
  return ParseDemandsJson(in, num_vertices);
}

void WriteDimacs(std::ostream& out, const LengthGraph& g,
                 std::span<const double> demands) {
  out << std::setprecision(17);
  out << "p min " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (demands[v] != 0.0) out << "n " << v + 1 << ' ' << demands[v] << '\n';
  }
  for (const Edge& e : g.edges()) {
    out << "a " << e.tail + 1 << ' ' << e.head + 1 << ' ' << e.length << '\n';
  }
}

}  // namespace gpflow
