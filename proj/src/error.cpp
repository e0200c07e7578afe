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

#include "famscore/error.hpp"

#include <algorithm>
#include <sstream>

namespace famscore {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::MonomorphicSnp: return "MonomorphicSnp";
        case ErrorCode::ZeroVarianceColumn: return "ZeroVarianceColumn";
        case ErrorCode::TooFewSingletons: return "TooFewSingletons";
        case ErrorCode::InfeasibleDesign: return "InfeasibleDesign";
        case ErrorCode::StratumMismatch: return "StratumMismatch";
        case ErrorCode::EmptyStratumPart: return "EmptyStratumPart";
        case ErrorCode::InsufficientPoints: return "InsufficientPoints";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownId: return "UnknownId";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::DegenerateFamily: return "DegenerateFamily";
        case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    }
    return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ConvergenceFailure:
        case ErrorCode::NotPositiveDefinite:
        case ErrorCode::DegenerateFamily:
        case ErrorCode::DegenerateColumn:
            return true;
        default:
            return false;
    }
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           const std::vector<std::size_t>& indices) {
    std::ostringstream out;
    out << to_string(code) << ": " << message;
    if (!indices.empty()) {
        out << " [indices:";
        const std::size_t shown = std::min<std::size_t>(indices.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) out << ' ' << indices[i];
        if (shown < indices.size()) out << " ... (" << indices.size() << " total)";
        out << ']';
    }
    return out.str();
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::vector<std::size_t> indices)
    : std::runtime_error(format_message(code, message, indices)),
      code_(code),
      indices_(std::move(indices)) {}

}  // namespace famscore
