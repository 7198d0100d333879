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

#include "dpcda/error.hpp"

namespace dpcda {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kLength: return "length error";
    case ErrorKind::kConsistency: return "consistency error";
    case ErrorKind::kValue: return "value error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kDimension: return "dimension error";
    case ErrorKind::kConfiguration: return "configuration error";
    case ErrorKind::kInsufficientClassSize: return "insufficient class size";
    case ErrorKind::kPrecision: return "precision failure";
    case ErrorKind::kCalibration: return "calibration error";
    case ErrorKind::kIo: return "io error";
  }
  return "error";
}

}  // namespace dpcda
