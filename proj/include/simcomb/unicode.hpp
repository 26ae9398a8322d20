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

#pragma once

#include <string>
#include <string_view>
#include <vector>

// Thin UTF-8 helpers over ICU's character database.
namespace simcomb::unicode {

/// Throws Error(Decode) naming the byte offset of the first ill-formed sequence.
void validate_utf8(std::string_view text);

/// Decodes well-formed UTF-8. Ill-formed input throws like validate_utf8.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

/// Splits into code points, each returned as its own UTF-8 string.
std::vector<std::string> split_chars(std::string_view text);

std::string to_nfc(std::string_view text);

bool is_whitespace(char32_t cp);
bool is_alpha(char32_t cp);
/// Punctuation (P*) or symbol (S*) general category.
bool is_punct_or_symbol(char32_t cp);

std::string to_lower(std::string_view text);
char32_t to_upper(char32_t cp);

}  // namespace simcomb::unicode
