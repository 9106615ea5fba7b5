// Copyright 2026 The tokfit Authors
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

namespace tokfit {

/// Root of every error the toolkit raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not line up (curve vs. window length, empty samples).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Bad values inside otherwise well-formed input: NaN losses, malformed
/// numeric fields, missing records. Messages carry file/line/column or the
/// offending occurrence when known.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid analysis settings (bucket counts, missing discrepancy logs, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Runs that cannot be analysed together.
class CohortError : public Error {
 public:
  using Error::Error;
};

/// Sign test on a sample with no non-zero observation.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

}  // namespace tokfit
