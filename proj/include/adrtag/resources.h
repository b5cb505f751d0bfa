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

#ifndef ADRTAG_RESOURCES_H_
#define ADRTAG_RESOURCES_H_

#include <string_view>

#include "adrtag/lexicon.h"

namespace adrtag {

// Small built-in resources, in the lexicon file format, so the whole toolkit
// runs without external downloads. Each can be replaced by a user file.
std::string_view bundled_adr_lexicon_text();
std::string_view bundled_drug_class_lexicon_text();
std::string_view bundled_semantic_types_text();
std::string_view bundled_negation_triggers_text();
std::string_view bundled_negation_ignore_text();
std::string_view bundled_species_text();

Lexicon bundled_adr_lexicon();
Lexicon bundled_drug_class_lexicon();
Lexicon bundled_negation_triggers();
Lexicon bundled_negation_ignore();
Lexicon bundled_species();

}  // namespace adrtag

#endif  // ADRTAG_RESOURCES_H_
