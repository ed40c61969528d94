/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/error.hpp"

namespace dclab {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidGeometry: return "invalid-geometry";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::MaskedRay: return "masked-ray";
    case ErrorCode::BracketFailure: return "bracket-failure";
    case ErrorCode::DegenerateFit: return "degenerate-fit";
    case ErrorCode::DegenerateSource: return "degenerate-source";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::Io: return "io";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Internal: return "internal";
    }
    return "unknown";
}

void raise(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

}  // namespace dclab
