#pragma once

#include <string>
#include <string_view>

#include "lcrn/semilinear.hpp"

namespace lcrn {

/// Parses a `.fnspec` JSON document (grammar in docs/formats.md).
/// Throws ParseError for malformed JSON or missing/mistyped fields (with the
/// JSON path in the message, and line/column for syntax errors) and
/// ValidationError for arity mismatches.
SemilinearFunctionSpec parseSpec(std::string_view text);

/// Canonical JSON with two-space indentation; round-trips through parseSpec.
std::string serializeSpec(const SemilinearFunctionSpec& spec);

}  // namespace lcrn
