#pragma once

#include <string>
#include <string_view>

#include "lcrn/crn.hpp"

namespace lcrn {

/// Parses the `.crn` text format (grammar in docs/formats.md).
///
/// Throws ParseError carrying the 1-based line number for malformed lines,
/// duplicate species declarations, undeclared species, repeated headers, and
/// reactions with more than two reactant molecules.
Crn parseCrn(std::string_view text);

/// Canonical text: header lines in fixed order, species sorted by name,
/// reaction terms sorted by name, one reaction per line in declaration order.
/// `parseCrn(serializeCrn(c)) == c` for every Crn.
std::string serializeCrn(const Crn& crn);

}  // namespace lcrn
