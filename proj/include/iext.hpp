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

// Umbrella header for the iext library.

#pragma once

#include "iext/algebra.hpp"
#include "iext/config.hpp"
#include "iext/errors.hpp"
#include "iext/integral.hpp"
#include "iext/laws.hpp"
#include "iext/measure.hpp"
#include "iext/stats.hpp"
#include "iext/supmeasure.hpp"
#include "iext/verify.hpp"
