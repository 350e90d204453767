// Copyright 2026 The splitmove Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace splitmove {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (wrong dimension, bad range).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configuration is inconsistent (K*N < 2, burn-in 0, alpha out of range...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The limit-state produced a non-finite value or could not be evaluated.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Requested operation needs data the object does not carry (e.g. no inverse hazard).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class SeedSelectionError : public Error {
 public:
  using Error::Error;
};

/// Not enough merged events to form an order statistic.
class ShortfallError : public Error {
 public:
  using Error::Error;
};

/// Cost planner could not find a root on (0, 1).
class PlannerError : public Error {
 public:
  using Error::Error;
};

/// Linear algebra failure in the surrogate (covariance not positive definite).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace splitmove
