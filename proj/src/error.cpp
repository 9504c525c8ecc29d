// Copyright 2026 The tqaoa Authors
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

#include "tqaoa/error.hpp"

namespace tqaoa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShape: return "shape error";
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kData: return "data error";
    case ErrorCode::kEmptyOverlap: return "empty-overlap error";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kInsufficientData: return "insufficient-data error";
    case ErrorCode::kCapacity: return "capacity error";
    case ErrorCode::kIndex: return "index error";
    case ErrorCode::kNormalization: return "normalization error";
    case ErrorCode::kConfiguration: return "configuration error";
    case ErrorCode::kBackendMismatch: return "backend-mismatch error";
    case ErrorCode::kEstimationFailure: return "estimation-failure error";
    case ErrorCode::kOptimizationAbort: return "optimization abort";
    case ErrorCode::kIo: return "io error";
  }
  return "error";
}

}  // namespace tqaoa
