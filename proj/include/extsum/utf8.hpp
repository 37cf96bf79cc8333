#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace extsum {

// Zero-width non-joiner: word-internal in Persian compounds.
inline constexpr char32_t kZwnj = 0x200C;

struct Utf8Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A decoded code point together with the byte offset of its first byte.
struct CodePoint {
  char32_t cp;
  std::size_t offset;
  std::size_t width;  // encoded length in bytes
};

// Strict decoder: rejects overlong forms, surrogates and values > U+10FFFF.
std::vector<CodePoint> decode_utf8(std::string_view text);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);

bool is_space_cp(char32_t cp);
bool is_letter_cp(char32_t cp);
bool is_digit_cp(char32_t cp);
bool is_combining_cp(char32_t cp);
// Letters of the ASCII and Latin-1 blocks (the script test for f4-style
// "foreign word" detection).
bool is_basic_latin_letter_cp(char32_t cp);

// Token-internal characters: letters, digits, combining marks and ZWNJ.
inline bool is_word_cp(char32_t cp) {
  return cp == kZwnj || is_letter_cp(cp) || is_digit_cp(cp) ||
         is_combining_cp(cp);
}

}  // namespace extsum
