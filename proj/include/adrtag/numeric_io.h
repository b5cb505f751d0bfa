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

#ifndef ADRTAG_NUMERIC_IO_H_
#define ADRTAG_NUMERIC_IO_H_

#include <string>
#include <string_view>

namespace adrtag {

// Shortest decimal rendering that parses back to the identical double.
std::string format_double(double value);

// Strict parse of a whole string; throws ValidationError on junk.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

// Fixed-point rendering with the given number of decimals.
std::string format_fixed(double value, int decimals);

}  // namespace adrtag

#endif  // ADRTAG_NUMERIC_IO_H_
