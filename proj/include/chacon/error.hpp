// Copyright 2026 The chacon-lab Authors
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

namespace chacon {

// Every error raised by the library derives from Error. The C API maps each
// subclass onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value left the set it must live in (e.g. a point outside [0,1)).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input: bad text encoding, out-of-range index, non-monotone sequence.
class InputError : public Error {
 public:
  using Error::Error;
};

// A triadic set cannot be expressed at the requested resolution.
class RefinementError : public Error {
 public:
  using Error::Error;
};

// Evaluation of T needed more stages than the configured cap.
class DepthExceededError : public Error {
 public:
  using Error::Error;
};

// A configured resource cap (index, support size, fragment count) was hit.
class ResourceCapError : public Error {
 public:
  using Error::Error;
};

// An operation's precondition failed on data; `witness` names where.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, long long witness)
      : Error(what), witness_(witness) {}
  long long witness() const noexcept { return witness_; }

 private:
  long long witness_;
};

}  // namespace chacon
