#pragma once

#include <string_view>

namespace tms::util {

/// Strict UTF-8 validation: rejects overlong encodings, surrogates and
/// code points beyond U+10FFFF.
bool is_valid_utf8(std::string_view text);

} // namespace tms::util
