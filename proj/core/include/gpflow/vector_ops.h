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

// Dense vector helpers. All reductions use pairwise summation so results do
// not depend on how a caller might split the work.

#ifndef GPFLOW_VECTOR_OPS_H_
#define GPFLOW_VECTOR_OPS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace gpflow {

using Vec = std::vector<double>;

// Pairwise sum of f(i) for i in [lo, hi).
template <typename F>
double PairwiseReduceRange(std::size_t lo, std::size_t hi, const F& f) {
  constexpr std::size_t kBlock = 16;
  if (hi - lo <= kBlock) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return PairwiseReduceRange(lo, mid, f) + PairwiseReduceRange(mid, hi, f);
}

template <typename F>
double PairwiseReduce(std::size_t n, const F& f) {
  return PairwiseReduceRange(0, n, f);
}

double Sum(std::span<const double> v);
double Dot(std::span<const double> a, std::span<const double> b);
double L1Norm(std::span<const double> v);
double LinfNorm(std::span<const double> v);
double L2Norm(std::span<const double> v);

// out = a - b.
Vec Subtract(std::span<const double> a, std::span<const double> b);
// a += s * b.
void Axpy(double s, std::span<const double> b, std::span<double> a);
Vec Scaled(std::span<const double> v, double s);
bool IsZero(std::span<const double> v);

}  // namespace gpflow

#endif  // GPFLOW_VECTOR_OPS_H_
