// Copyright 2026 The weakprobe Authors
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

namespace weakprobe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A state or coefficient matrix is not normalized.
class NotNormalized : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// A value violates a documented invariant (non-Hermitian observable,
/// negative density-matrix eigenvalue, non-orthonormal basis, ...).
class InvariantViolation : public Error {
  public:
    using Error::Error;
};

/// |<f|i>| fell below the overlap threshold; the weak value is undefined.
class PostSelectionOrthogonal : public Error {
  public:
    using Error::Error;
};

/// The exact post-selection probability vanishes.
class PostSelectionImpossible : public Error {
  public:
    using Error::Error;
};

/// The probe is separable (zero entanglement entropy); omega and the
/// entropy ratio are undefined.
class DegenerateProbe : public Error {
  public:
    using Error::Error;
};

/// A full probe observable does not commute with the Schmidt projectors.
class ObservableNotSchmidtDiagonal : public Error {
  public:
    using Error::Error;
};

/// Malformed configuration input. The message names the offending field.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace weakprobe
