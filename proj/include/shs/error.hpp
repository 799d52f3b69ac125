// Copyright 2026 The SHS Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHS_ERROR_HPP_
#define SHS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace shs {

// Mirrors shs_status in the C API (values must stay in sync).
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kConfig = 4,
  kCapability = 5,
  kTraining = 6,
  kNumerical = 7,
  kInfeasible = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shs

#endif  // SHS_ERROR_HPP_
