// Copyright 2026 The neariso Authors.
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

namespace neariso {

// Raised for malformed user input: bad signals, weights, options, files.
// The command-line tool maps every subclass to exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidSignal : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidWeights : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class PreconditionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A solver reached a state that exact arithmetic rules out.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace neariso
