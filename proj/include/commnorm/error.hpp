// Copyright 2026 The commnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace commnorm {

/// Caller supplied something outside an operation's precondition
/// (dimension mismatch, non-Hermitian where Hermitian is required, bad token).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical result contradicts an identity that must hold exactly,
/// beyond round-off. Indicates a logic bug rather than bad input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A map handed to a reconstructor does not have the required preserver form.
class NotAPreserver : public std::runtime_error {
 public:
  NotAPreserver(std::string constraint, const std::string& detail)
      : std::runtime_error("not a preserver: " + constraint + " (" + detail + ")"),
        constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

/// A branch decision was won by less than the required margin.
class AmbiguousBranch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sampled probe set lacks the anchor inputs a reconstructor needs.
class MissingAnchors : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace commnorm
