// Copyright 2026 The Blockscope Authors
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

#ifndef BLOCKSCOPE_ERRORS_HPP_
#define BLOCKSCOPE_ERRORS_HPP_

#include <stdexcept>

namespace blockscope
{

// Unreadable or unwritable file.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: bad headers, geometry mismatches, unsupported layouts.
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace blockscope

#endif  // BLOCKSCOPE_ERRORS_HPP_
