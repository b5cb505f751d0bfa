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

#include "adrtag/log.h"

#include <iostream>
#include <string>
#include <utility>

namespace adrtag {
namespace {

LogSink& sink() {
  static LogSink current;
  return current;
}

}  // namespace

LogSink set_warning_sink(LogSink s) { return std::exchange(sink(), std::move(s)); }

void log_warning(std::string_view message) {
  if (sink()) {
    sink()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace adrtag
