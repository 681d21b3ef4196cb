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

#include "gpflow/vector_ops.h"

#include <algorithm>
#include <cmath>

#include "gpflow/errors.h"

namespace gpflow {

double Sum(std::span<const double> v) {
  return PairwiseReduce(v.size(), [&](std::size_t i) { return v[i]; });
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractViolation("Dot: size mismatch");
  return PairwiseReduce(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double L1Norm(std::span<const double> v) {
  return PairwiseReduce(v.size(),
                        [&](std::size_t i) { return std::abs(v[i]); });
}

double LinfNorm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double L2Norm(std::span<const double> v) {
  double scale = LinfNorm(v);
  if (scale == 0.0) return 0.0;
  double s = PairwiseReduce(v.size(), [&](std::size_t i) {
    double t = v[i] / scale;
    return t * t;
  });
  return scale * std::sqrt(s);
}

Vec Subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractViolation("Subtract: size mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

void Axpy(double s, std::span<const double> b, std::span<double> a) {
  if (a.size() != b.size()) throw ContractViolation("Axpy: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

Vec Scaled(std::span<const double> v, double s) {
  Vec out(v.begin(), v.end());
  for (double& x : out) x *= s;
  return out;
}

bool IsZero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace gpflow
