/**
 * Copyright 2026 The padfair Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "padfair/error.hpp"

namespace padfair {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kUnknownAttribute: return "unknown-attribute";
    case ErrorCode::kMissingAttribute: return "missing-attribute";
    case ErrorCode::kNonFiniteScore: return "non-finite-score";
    case ErrorCode::kUnresolvedId: return "unresolved-id";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kUndefinedRate: return "undefined-rate";
    case ErrorCode::kSingularDenominator: return "singular-denominator";
    case ErrorCode::kSplitOverlap: return "split-overlap";
    case ErrorCode::kEmptySelection: return "empty-selection";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kOutOfBounds: return "out-of-bounds";
    case ErrorCode::kEmptyPool: return "empty-pool";
    case ErrorCode::kGeometry: return "geometry";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

bool is_computational(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUndefinedRate:
    case ErrorCode::kSingularDenominator:
    case ErrorCode::kEmptySelection:
    case ErrorCode::kEmptyPool:
      return true;
    default:
      return false;
  }
}

}  // namespace padfair
