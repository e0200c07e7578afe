/*
 * Copyright 2026 The famscore Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace famscore {

enum class ErrorCode {
    // input validation
    InvalidArgument,
    DimensionMismatch,
    MonomorphicSnp,
    ZeroVarianceColumn,
    TooFewSingletons,
    InfeasibleDesign,
    StratumMismatch,
    EmptyStratumPart,
    InsufficientPoints,
    ParseError,
    UnknownId,
    // numerical failures
    ConvergenceFailure,
    NotPositiveDefinite,
    DegenerateFamily,
    DegenerateColumn,
};

std::string_view to_string(ErrorCode code) noexcept;

// Validation errors map to CLI exit code 2, numerical failures to 3.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::size_t> indices = {});

    ErrorCode code() const noexcept { return code_; }
    // Offending row/column/individual indices, when the error has any.
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

private:
    ErrorCode code_;
    std::vector<std::size_t> indices_;
};

}  // namespace famscore
