// Copyright 2026 The povmsim Authors
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

namespace povmsim {

/// Failure classes; the C API maps these onto status codes and the CLI onto
/// exit codes (Validation -> 2, Numerical -> 3).
enum class ErrorKind {
    InvalidArgument,
    Validation,
    Numerical,
    Io,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Broken invariant of an input value (dimensions, Hermiticity, trace, ...).
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &what)
        : Error(ErrorKind::Validation, what) {}
};

/// A numerical guard tripped: ill-conditioned solve, singular inverse,
/// integrator step too large.
class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string &what)
        : Error(ErrorKind::Numerical, what) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string &what) : Error(ErrorKind::Io, what) {}
};

} // namespace povmsim
