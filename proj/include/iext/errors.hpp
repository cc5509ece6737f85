// Copyright 2026 The iext Authors
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

namespace iext {

// Caller violated a documented precondition (empty list, dimension mismatch,
// nonpositive coefficient, ...).
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The integrand is not in L^alpha_+(m): its norm is infinite or the quadrature
// could not establish finiteness.
class integrability_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A truncation or series expansion could not reach its target (iteration cap,
// unreachable epsilon on a misdeclared support).
class truncation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed run configuration. `where` is a JSON pointer to the offending field.
class config_error : public std::runtime_error {
 public:
  config_error(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace iext
