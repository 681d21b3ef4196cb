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

#ifndef GPFLOW_ERRORS_H_
#define GPFLOW_ERRORS_H_

#include <stdexcept>
#include <string>

namespace gpflow {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a precondition (dimension mismatch, bad argument) or an
// internal invariant failed. Indicates a bug rather than a hard instance.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// The input problem has no solution (nonzero total demand, disconnected
// graph, malformed file).
class InfeasibleInput : public Error {
 public:
  using Error::Error;
};

// Solvers or operators were combined inconsistently.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// An exact oracle was asked to solve an instance above its size budget.
class OracleBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// An oracle reported something impossible, e.g. optimum 0 for b != 0.
class OracleInconsistency : public Error {
 public:
  using Error::Error;
};

// A payoff evaluated during a multiplicative-weights run exceeded the
// declared width.
class WidthViolation : public Error {
 public:
  using Error::Error;
};

// Wraps an error with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace gpflow

#endif  // GPFLOW_ERRORS_H_
