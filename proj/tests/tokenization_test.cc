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

#include "adrtag/tokenization.h"

#include "adrtag/errors.h"
#include "bio_oracle.h"
#include "doctest.h"

namespace adrtag {
namespace {

std::vector<std::string> words(std::u32string_view text) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(text)) out.push_back(t.surface);
  return out;
}

TEST_CASE("tokenizer detaches edge punctuation only") {
  CHECK(words(U"Nausea (12.5%), vomiting.") ==
        std::vector<std::string>{"Nausea", "(", "12.5", "%", ")", ",", "vomiting", "."});
  CHECK(words(U"beta-blockers") == std::vector<std::string>{"beta-blockers"});
  CHECK(words(U"3.5 mg/kg") == std::vector<std::string>{"3.5", "mg/kg"});
  CHECK(words(U"*rash†") == std::vector<std::string>{"*", "rash", "†"});
  CHECK(words(U"  \t ").empty());
}

TEST_CASE("token spans index code points") {
  const auto tokens = tokenize(U"fièvre élevée.");
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[1].span == Span{7, 13});
  CHECK(tokens[2].span == Span{13, 14});
  CHECK(tokens[2].index == 2);
}

TEST_CASE("label names") {
  CHECK(label_name(BioLabel::begin(EntityClass::kSeverity)) == "B-Severity");
  CHECK(parse_label("I-Animal") == BioLabel::inside(EntityClass::kAnimal));
  CHECK(parse_label("O") == BioLabel::outside());
  CHECK_THROWS_AS(parse_label("X-Animal"), ValidationError);
}

TEST_CASE("label sets") {
  const auto all = LabelSet::joint_all();
  CHECK(all.size() == 13);
  CHECK(all[0].is_outside());
  CHECK(all.index_of(BioLabel::begin(EntityClass::kAdverseReaction)) == 1);
  CHECK(all.index_of(BioLabel::inside(EntityClass::kAnimal)) == 12);
  const auto one = LabelSet::for_class(EntityClass::kFactor);
  CHECK(one.names() == std::vector<std::string>{"O", "B-Factor", "I-Factor"});
  CHECK_THROWS_AS(one.index_of(BioLabel::begin(EntityClass::kAnimal)), ValidationError);
  CHECK(one.classes() == std::vector<EntityClass>{EntityClass::kFactor});
}

TEST_CASE("midpoint alignment") {
  const std::u32string text = U"severe skin rash.";
  const auto tokens = tokenize(text);
  // Mention "skin ras" still covers "rash": its midpoint lies inside.
  std::vector<MentionAnnotation> ms = {{"T1", EntityClass::kAdverseReaction, {{7, 15}}, ""}};
  const auto labels = align_annotations(tokens, ms, EntityClass::kAdverseReaction);
  CHECK(labels == std::vector<BioLabel>{BioLabel::outside(),
                                        BioLabel::begin(EntityClass::kAdverseReaction),
                                        BioLabel::inside(EntityClass::kAdverseReaction),
                                        BioLabel::outside()});
  // Only other classes encoded: all O.
  for (const auto& l : align_annotations(tokens, ms, EntityClass::kSeverity)) {
    CHECK(l.is_outside());
  }
}

TEST_CASE("overlapping same-class mentions are rejected") {
  const auto tokens = tokenize(U"skin rash");
  std::vector<MentionAnnotation> ms = {{"T1", EntityClass::kAdverseReaction, {{0, 9}}, ""},
                                       {"T2", EntityClass::kAdverseReaction, {{5, 9}}, ""}};
  try {
    align_annotations(tokens, ms, EntityClass::kAdverseReaction);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("T1") != std::string::npos);
    CHECK(what.find("T2") != std::string::npos);
  }
}

TEST_CASE("joint alignment keeps the earlier class") {
  const auto tokens = tokenize(U"no rash");
  std::vector<MentionAnnotation> ms = {{"T1", EntityClass::kNegation, {{0, 7}}, ""},
                                       {"T2", EntityClass::kAdverseReaction, {{3, 7}}, ""}};
  const auto labels =
      align_joint(tokens, ms, {EntityClass::kAdverseReaction, EntityClass::kNegation});
  CHECK(labels[0] == BioLabel::begin(EntityClass::kNegation));
  CHECK(labels[1] == BioLabel::begin(EntityClass::kAdverseReaction));
}

TEST_CASE("orphan I starts a mention") {
  TextUnit unit{U"mild rash today", 100, {}};
  TaggedSequence seq{unit, tokenize(unit.text),
                     {BioLabel::inside(EntityClass::kSeverity),
                      BioLabel::inside(EntityClass::kAdverseReaction), BioLabel::outside()}};
  const auto ms = decode_mentions(seq);
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].cls == EntityClass::kSeverity);
  CHECK(ms[0].spans == std::vector<Span>{{100, 104}});
  CHECK(ms[1].surface == "rash");
  CHECK(ms[0].id.empty());
}

TEST_CASE("B after I of the same class splits mentions") {
  TextUnit unit{U"a b c", 0, {}};
  const auto adr = EntityClass::kAdverseReaction;
  TaggedSequence seq{unit, tokenize(unit.text),
                     {BioLabel::begin(adr), BioLabel::inside(adr), BioLabel::begin(adr)}};
  const auto ms = decode_mentions(seq);
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].surface == "a b");
}

TEST_CASE("project_to_unit clips to local offsets") {
  TextUnit unit{U"rash", 10, {}};
  std::vector<MentionAnnotation> ms = {{"T1", EntityClass::kAdverseReaction, {{10, 14}}, "rash"},
                                       {"T2", EntityClass::kSeverity, {{0, 5}}, "x"}};
  const auto local = project_to_unit(unit, ms);
  REQUIRE(local.size() == 1);
  CHECK(local[0].spans == std::vector<Span>{{0, 4}});
}

TEST_CASE("random BIO round trips") {
  Rng rng(42);
  for (int i = 0; i < 300; ++i) {
    const auto c = testing::random_bio_case(rng);
    CHECK(testing::same_mentions(testing::bio_round_trip(c), c.mentions));
  }
}

}  // namespace
}  // namespace adrtag
