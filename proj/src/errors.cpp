// Copyright 2026 The QSignal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsignal/errors.hpp"

namespace qsignal {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroVector:
            return "ZeroVector";
        case ErrorKind::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorKind::NotHermitian:
            return "NotHermitian";
        case ErrorKind::NotProjector:
            return "NotProjector";
        case ErrorKind::ProbabilityOutOfRange:
            return "ProbabilityOutOfRange";
        case ErrorKind::NonPositiveWidth:
            return "NonPositiveWidth";
        case ErrorKind::WrongRepresentation:
            return "WrongRepresentation";
        case ErrorKind::WidthNotIncreased:
            return "WidthNotIncreased";
        case ErrorKind::ExtentTooSmall:
            return "ExtentTooSmall";
        case ErrorKind::BadGrid:
            return "BadGrid";
        case ErrorKind::WindowOutsideGrid:
            return "WindowOutsideGrid";
        case ErrorKind::MismatchedReports:
            return "MismatchedReports";
        case ErrorKind::InvalidParameter:
            return "InvalidParameter";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {
}

}  // namespace qsignal
