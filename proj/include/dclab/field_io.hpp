/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <string>

#include "dclab/grid.hpp"

namespace dclab {

/// DCLAB1 dump: header line `DCLAB1 <dim> <cells...> <h...> <origin...>`,
/// then row-major values. ASCII bodies hold one value per line with 17
/// significant digits; binary bodies hold little-endian IEEE doubles.
/// Both forms round-trip bit-exactly.
void write_field(const ScalarField& u, const std::string& path, bool binary);
std::string format_field(const ScalarField& u, bool binary);

ScalarField read_field(const std::string& path);
ScalarField parse_field(const std::string& bytes);

}  // namespace dclab
