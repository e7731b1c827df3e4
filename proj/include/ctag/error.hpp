// Copyright 2026 The corpus-tagger Authors.
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

#ifndef CTAG_ERROR_HPP_
#define CTAG_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ctag {

// Bad or missing input data: unreadable files, malformed formats,
// inconsistent artifacts. Maps to exit code 1 in the CLI.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated internal contract or numeric failure. Maps to exit code 2.
class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ctag

#endif  // CTAG_ERROR_HPP_
