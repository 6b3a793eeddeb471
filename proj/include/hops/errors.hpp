// Copyright 2026 The hops Authors
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

namespace hops {

// Base class for all library failures. The CLI maps each subclass to an
// exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration or arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An input violates a documented precondition (dimension mismatch, residual
// failure, non-generating group, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A numerical or combinatorial guard tripped (qubit cap, Magnus convergence,
// block-count limits).
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace hops
