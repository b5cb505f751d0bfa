// Copyright 2026 The adrtag Authors.
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

#ifndef ADRTAG_ERRORS_H_
#define ADRTAG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace adrtag {

// Base class of all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable or unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input data violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad hyperparameters, mismatched shapes or inconsistent resources.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical failure during training (non-finite loss and the like).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace adrtag

#endif  // ADRTAG_ERRORS_H_
