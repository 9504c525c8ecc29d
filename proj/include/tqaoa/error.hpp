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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tqaoa {

enum class ErrorCode {
  kShape,             // dimension or length mismatch
  kParameter,         // argument outside its documented domain
  kData,              // malformed or non-physical input data
  kEmptyOverlap,      // price series share fewer than two dates
  kDomain,            // mathematical domain violation (e.g. return <= -1)
  kInsufficientData,  // too few observations for an estimator
  kCapacity,          // problem exceeds a backend or enumeration limit
  kIndex,             // qubit index out of range or repeated
  kNormalization,     // probability distribution does not sum to one
  kConfiguration,     // incompatible option combination
  kBackendMismatch,   // noise requested on a backend that cannot carry it
  kEstimationFailure, // penalty search did not converge
  kOptimizationAbort, // objective returned a non-finite value
  kIo,                // file could not be read or written
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tqaoa
