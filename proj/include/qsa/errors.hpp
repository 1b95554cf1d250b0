// Copyright 2026 The QSA Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsa {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Instance data that makes the analysis ill defined: zero or negative
/// distances, or a vanishing distance gap (the precision formula diverges).
class DegenerateInstance : public Error {
  public:
    using Error::Error;
};

/// Edge (j, k) with j = k or an out-of-range city index.
class InvalidEdge : public Error {
  public:
    using Error::Error;
};

/// City count outside the supported range.
class InvalidSize : public Error {
  public:
    using Error::Error;
};

/// Request exceeding an enumeration or backend cap; the message names both.
class TooLarge : public Error {
  public:
    using Error::Error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Post-selection success probability too small to renormalize.
class NumericalUnderflow : public Error {
  public:
    using Error::Error;
};

class InternalError : public Error {
  public:
    using Error::Error;
};

/// Instance file rejected; carries the 1-based line number of the offense.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string &what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace qsa
