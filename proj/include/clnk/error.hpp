// Copyright 2026 The clnk Authors.
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

namespace clnk {

/// Bad user input: malformed files, invalid indices, infeasible configs.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated internal precondition (stale caches, shape mismatches between
/// components that should have been built together).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace clnk
