// Copyright 2026 The Clarify Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace clarify {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, missing fields, truncated streams.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data invariant (duplicate id, unknown
// term, surface string claimed twice).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersion : public Error {
 public:
  using Error::Error;
};

// A caller passed an argument outside an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A session transition was requested in the wrong state.
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace clarify
