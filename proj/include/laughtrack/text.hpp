#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace laughtrack {

/// Decodes UTF-8 into Unicode scalar values. Ill-formed sequences decode to
/// U+FFFD, one replacement per maximal ill-formed subsequence.
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(std::u32string_view s);

/// Pre-processing applied before any similarity computation: simple Unicode
/// case folding, typographic quotes and apostrophes folded to ASCII, runs of
/// whitespace collapsed to one space, and the ends trimmed. Punctuation is
/// kept. Idempotent.
std::string normalize_text(std::string_view s);

/// Same as normalize_text, returning scalar values.
std::u32string normalize_text_u32(std::string_view s);

bool is_whitespace(char32_t c);

/// 64-bit FNV-1a over raw bytes. Stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace laughtrack
