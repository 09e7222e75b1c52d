/*
 * Copyright 2026 The advmask Authors
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

namespace advmask {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported file content (WAV headers, model files, manifests).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a closed-form function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Violated operation precondition: shape mismatch, rate mismatch, bad config value.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The input does not satisfy a semantic precondition (e.g. a perturbation that
/// is not adversarial).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace advmask
