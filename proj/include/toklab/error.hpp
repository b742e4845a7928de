// Copyright 2026 The Toklab Authors
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

#ifndef TOKLAB_ERROR_HPP_
#define TOKLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace toklab {

enum class ErrorKind {
  kInvalidArgument,  // bad config, bad pattern, precondition violated
  kParse,            // malformed input data
  kValidation,       // well-formed data that violates an invariant
  kIo,
  kVersion,
  kCorrupt,          // truncated file or checksum mismatch
  kNotFitted,
  kNotFound,
  kLeakage,
};

const char* ErrorKindName(ErrorKind kind);

// Every failure raised by the library is an Error carrying a kind, so
// frontends can map it to an exit code or an HTTP status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace toklab

#endif  // TOKLAB_ERROR_HPP_
