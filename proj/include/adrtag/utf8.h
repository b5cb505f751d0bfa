// Copyright 2026 The adrtag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADRTAG_UTF8_H_
#define ADRTAG_UTF8_H_

#include <string>
#include <string_view>

namespace adrtag {

// Decodes UTF-8. Throws ValidationError on malformed input.
std::u32string to_u32(std::string_view utf8);

std::string to_utf8(std::u32string_view text);
std::string to_utf8(char32_t c);

bool is_space(char32_t c);
bool is_digit(char32_t c);
bool is_alpha(char32_t c);

// ASCII-only case folding; other code points pass through.
char32_t to_lower(char32_t c);
std::u32string to_lower(std::u32string_view text);
std::string to_lower(std::string_view utf8);

// Lowercases and collapses whitespace runs to one space, trimming the ends.
std::string normalize_phrase(std::string_view utf8);

std::u32string_view trim(std::u32string_view text);
std::string_view trim(std::string_view text);

}  // namespace adrtag

#endif  // ADRTAG_UTF8_H_
