// Copyright 2026 The privnav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace privnav {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user-supplied input: files, parameters, indices.
class InputError : public Error {
 public:
  using Error::Error;
};

// A peer violated the protocol or a session invariant failed.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Socket or framing failure.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized data. Callers inside the protocol catch this and
// substitute random values; elsewhere it surfaces as a protocol error.
class DecodeError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

}  // namespace privnav
