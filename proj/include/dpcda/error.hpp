// Copyright 2026 The dpcda Authors
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

#ifndef DPCDA_ERROR_HPP_
#define DPCDA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpcda {

enum class ErrorKind {
  kFormat,
  kLength,
  kConsistency,
  kValue,
  kParse,
  kDimension,
  kConfiguration,
  kInsufficientClassSize,
  kPrecision,
  kCalibration,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Every failure surfaced by the library carries one of the kinds above; the
// CLI maps kinds onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dpcda

#endif  // DPCDA_ERROR_HPP_
