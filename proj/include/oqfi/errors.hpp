// Copyright 2026 the oqfi authors
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

namespace oqfi {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated.
struct PreconditionError : Error {
  using Error::Error;
};

/// A numerical procedure failed (non-convergence, overflow, underflow).
struct NumericalError : Error {
  using Error::Error;
};

/// Invalid configuration or input file.
struct ConfigError : Error {
  using Error::Error;
};

/// The zero eigenvalue of a Liouvillian is degenerate where a unique
/// stationary state is required; carries the degeneracy count.
struct DegenerateStationaryError : PreconditionError {
  DegenerateStationaryError(const std::string& what, int degeneracy_)
      : PreconditionError(what), degeneracy(degeneracy_) {}
  int degeneracy;
};

}  // namespace oqfi
