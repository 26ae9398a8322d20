/*
 * Copyright 2026 The simcomb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "simcomb/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "simcomb/error.hpp"

namespace simcomb::unicode {

namespace {

// Decodes one code point at `pos`, advancing it. Returns a negative value on
// ill-formed input.
UChar32 next_cp(std::string_view text, int32_t& pos) {
  UChar32 cp = 0;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  U8_NEXT(s, pos, length, cp);
  return cp;
}

[[noreturn]] void decode_error(int32_t offset) {
  fail(ErrorCode::Decode, "invalid UTF-8 at byte offset " + std::to_string(offset));
}

}  // namespace

void validate_utf8(std::string_view text) {
  int32_t pos = 0;
  const auto length = static_cast<int32_t>(text.size());
  while (pos < length) {
    const int32_t start = pos;
    if (next_cp(text, pos) < 0) decode_error(start);
  }
}

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  int32_t pos = 0;
  const auto length = static_cast<int32_t>(text.size());
  while (pos < length) {
    const int32_t start = pos;
    const UChar32 cp = next_cp(text, pos);
    if (cp < 0) decode_error(start);
    out.push_back(static_cast<char32_t>(cp));
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
  if (error) fail(ErrorCode::InvalidArgument, "code point out of range");
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append_utf8(out, cp);
  return out;
}

std::vector<std::string> split_chars(std::string_view text) {
  std::vector<std::string> out;
  int32_t pos = 0;
  const auto length = static_cast<int32_t>(text.size());
  while (pos < length) {
    const int32_t start = pos;
    if (next_cp(text, pos) < 0) decode_error(start);
    out.emplace_back(text.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(pos - start)));
  }
  return out;
}

std::string to_nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) fail(ErrorCode::Config, "ICU NFC normalizer unavailable");
  const auto source =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (nfc->isNormalized(source, status) && U_SUCCESS(status)) return std::string(text);
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) fail(ErrorCode::Decode, "NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

bool is_alpha(char32_t cp) { return u_isalpha(static_cast<UChar32>(cp)); }

bool is_punct_or_symbol(char32_t cp) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(cp));
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : decode(text)) append_utf8(out, static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))));
  return out;
}

char32_t to_upper(char32_t cp) { return static_cast<char32_t>(u_toupper(static_cast<UChar32>(cp))); }

}  // namespace simcomb::unicode
