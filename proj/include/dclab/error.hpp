/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace dclab {

/// Error categories shared by the C++ core and the C API status codes.
/// The numeric values are part of the C ABI (see dclab.h) and must not change.
enum class ErrorCode : int {
    InvalidArgument = 1,
    InvalidGeometry = 2,
    Domain = 3,
    MaskedRay = 4,
    BracketFailure = 5,
    DegenerateFit = 6,
    DegenerateSource = 7,
    OutOfRange = 8,
    Io = 9,
    Parse = 10,
    Internal = 11,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<std::size_t> node = std::nullopt)
        : std::runtime_error(what), code_(code), node_(node)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

    /// Lattice node the failure refers to, when there is one.
    [[nodiscard]] std::optional<std::size_t> node() const noexcept { return node_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> node_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const std::string& what)
{
    if (!cond) raise(code, what);
}

}  // namespace dclab
