/*
 * Copyright 2026 The churnpno Authors.
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

#ifndef CHURNPNO_ERROR_H_
#define CHURNPNO_ERROR_H_

#include <stdexcept>
#include <string>

namespace churnpno {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating input data (CSV cells, record fields).
class DataError : public Error {
 public:
  using Error::Error;
};

// Arguments outside an operation's domain (q out of range, k invalid, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or gradient during optimization.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace churnpno

#endif  // CHURNPNO_ERROR_H_
