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

#ifndef ADRTAG_SRC_FILE_UTIL_H_
#define ADRTAG_SRC_FILE_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace adrtag::internal {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::vector<std::string_view> split(std::string_view s, char sep);
// Lines without their terminators; a trailing empty line is dropped.
std::vector<std::string_view> split_lines(std::string_view s);

}  // namespace adrtag::internal

#endif  // ADRTAG_SRC_FILE_UTIL_H_
