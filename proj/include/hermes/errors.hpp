/*
 * Copyright 2026 The Hermes Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace hermes {

/// Base class of every error thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or mismatched scheme parameters (wrong basis, wrong context, bad t).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Polynomial supplied in the wrong representation domain (NTT vs coefficient).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Value outside Z_t or a slot index outside the plaintext vector.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Packed vector is full; insertion beyond capacity is disallowed.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Slot index violates the logical-length precondition of an update.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Rotation step requested with no matching key in the Galois key set.
class MissingKeyError : public Error {
 public:
  using Error::Error;
};

/// Update refused because the noise budget would drop below the safety floor.
class RefreshRequiredError : public Error {
 public:
  using Error::Error;
};

/// Unknown table or group in the catalog.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while reading or writing catalog/key files.
class IoError : public Error {
 public:
  using Error::Error;
};

// Load errors for the binary container formats. Each failure mode is a
// distinct type so callers can react (and tests can assert) precisely.
class SerialError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public SerialError {
 public:
  using SerialError::SerialError;
};

class BadVersionError : public SerialError {
 public:
  using SerialError::SerialError;
};

class TruncatedError : public SerialError {
 public:
  using SerialError::SerialError;
};

class ParamsMismatchError : public SerialError {
 public:
  using SerialError::SerialError;
};

}  // namespace hermes
