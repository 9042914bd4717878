#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subcollect {

enum class Charset { utf8, latin1, windows1252 };

/// Maps an IANA-style label to a supported charset; nullopt if unsupported.
std::optional<Charset> charset_from_label(std::string_view label);

/// Decodes to code points; malformed sequences become U+FFFD.
std::u32string decode_text(std::string_view bytes, Charset charset);

/// Letters and digits of the Latin, Greek, Cyrillic, Armenian, Hebrew, Arabic,
/// Devanagari, Thai, kana, CJK and Hangul blocks, plus fullwidth ASCII.
bool is_word_char(char32_t c);
/// Simple case folding for the cased scripts above.
char32_t to_lower(char32_t c);

void append_utf8(std::string& out, char32_t c);

/// Lowercased maximal runs of word characters.
void append_tokens(std::u32string_view text, std::vector<std::string>& out);
std::vector<std::string> tokenize(std::string_view utf8_text);

}  // namespace subcollect
