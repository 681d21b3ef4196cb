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

// Text formats for graphs and demands.
//
// Graph files are line oriented, vertex ids are 1-based:
//
//   c <anything>              comment
//   p min <n> <m>             problem line, exactly once, before n/a lines
//   n <id> <demand>           optional, at most once per vertex (default 0)
//   a <u> <v> <length>        undirected edge, oriented u -> v; exactly m
//
// Demand files are JSON objects {"<id>": <value>, ...} with 1-based ids;
// missing vertices have demand 0. When given they replace the n lines.

#ifndef GPFLOW_GRAPH_IO_H_
#define GPFLOW_GRAPH_IO_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "gpflow/graph.h"

namespace gpflow {

struct FlowInstance {
  LengthGraph graph;
  Vec demands;
};

// Throws InfeasibleInput with a line number on malformed input, nonzero
// total demand, self-loops, non-positive lengths or a disconnected graph.
FlowInstance ParseDimacs(std::istream& in);
FlowInstance ReadDimacsFile(const std::string& path);

Vec ParseDemandsJson(std::istream& in, int num_vertices);
Vec ReadDemandsFile(const std::string& path, int num_vertices);

void WriteDimacs(std::ostream& out, const LengthGraph& g,
                 std::span<const double> demands);

}  // namespace gpflow

#endif  // GPFLOW_GRAPH_IO_H_
