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

#include <cstddef>
#include <optional>

#include "iext/algebra.hpp"

namespace iext {

enum class Backend { cells, series };

inline const char* to_string(Backend b) { return b == Backend::cells ? "cells" : "series"; }

/// The atom (series backend) or partition cell (cell backend) that attains
/// the implicit maximum.
struct AttainingAtom {
  std::size_t index;
  double location;
  double magnitude;
};

/// A realised value of I(g) with diagnostics.
struct IntegralResult {
  Point value;
  double f_value = 0.0;
  std::optional<AttainingAtom> atom;
  /// P(I(g) != I(g 1_region)) for the region actually realised.
  double mismatch_prob = 0.0;
  std::size_t atoms_used = 0;
  Backend backend = Backend::series;
  /// Integral of |g_n^alpha - g^alpha| dm for the level-n approximation (cell backend).
  std::optional<double> lalpha_gap;
};

}  // namespace iext
