// Copyright 2026 The cfusim Authors
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

#ifndef CFUSIM_ERROR_H_
#define CFUSIM_ERROR_H_

#include <stdexcept>
#include <string>

namespace cfusim {

// Error taxonomy mapped to CLI exit codes:
//   usage errors        -> 1 (handled by the CLI layer)
//   InfeasibleError     -> 2
//   ParseError          -> 3
//   GoldenMismatchError -> 4
//   LimitError          -> 5

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

class GoldenMismatchError : public std::runtime_error {
 public:
  explicit GoldenMismatchError(const std::string& msg)
      : std::runtime_error(msg) {}
};

class LimitError : public std::runtime_error {
 public:
  explicit LimitError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cfusim

#endif  // CFUSIM_ERROR_H_
