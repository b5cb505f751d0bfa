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

#include "adrtag/pipeline.h"

#include "adrtag/errors.h"
#include "doctest.h"
#include "test_util.h"

namespace adrtag {
namespace {

using C = EntityClass;

RunConfig small_config(const std::string& preset, const std::filesystem::path& out) {
  RunConfig config = preset_config(preset);
  config.corpus = testing::source_dir() / "data" / "fixture_corpus";
  config.output = out;
  config.embeddings.dim = 20;
  config.embeddings.epochs = 5;
  config.clusters = 10;
  config.crf.max_iters = 50;
  config.blstm.hidden = 16;
  config.blstm.learning_rate = 0.01;
  config.blstm.epochs = 10;
  config.blstm.patience = 5;
  return config;
}

TEST_CASE("presets") {
  const auto run1 = preset_config("run1");
  CHECK(run1.tagger(C::kAdverseReaction) == TaggerKind::kCrf);
  CHECK(run1.tagger(C::kSeverity) == TaggerKind::kBlstm);
  CHECK(run1.tagger(C::kDrugClass) == TaggerKind::kBlstm);
  CHECK(run1.tagger(C::kNegation) == TaggerKind::kRule);
  CHECK(run1.tagger(C::kAnimal) == TaggerKind::kRule);
  const auto run2 = preset_config("run2");
  CHECK(run2.tagger(C::kAdverseReaction) == TaggerKind::kStacked);
  CHECK(run2.tagger(C::kAnimal) == TaggerKind::kStacked);
  CHECK(run2.tagger(C::kNegation) == TaggerKind::kRule);
  CHECK(run1.blstm.hidden == 170);
  CHECK(run1.blstm.learning_rate == 1e-5);
  CHECK(run1.embeddings.dim == 200);
  CHECK(run1.clusters == 50);
  CHECK_THROWS_AS(preset_config("run3"), ConfigError);
}

TEST_CASE("INI parsing and overrides") {
  const auto config = parse_run_config(
      "[blstm]\nhidden = 8\n[taggers]\nAnimal = crf\n[split]\nseed = 4\n", preset_config("run1"));
  CHECK(config.blstm.hidden == 8);
  CHECK(config.tagger(C::kAnimal) == TaggerKind::kCrf);
  CHECK(config.tagger(C::kNegation) == TaggerKind::kRule);
  CHECK(config.split.seed == 4);
  CHECK_THROWS_AS(parse_run_config("[blstm]\nhiden = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[blstm]\nhidden = lots\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[taggers]\nAnimal = magic\n"), ConfigError);

  RunConfig c = preset_config("run1");
  apply_override(c, "crf.l2_sigma=2.5");
  CHECK(c.crf.l2_sigma == 2.5);
  CHECK_THROWS_AS(apply_override(c, "crf.l2_sigma"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "nope.key=1"), ConfigError);
}

TEST_CASE("formatted config parses back to itself") {
  const auto c = preset_config("run2");
  const auto text = format_run_config(c);
  CHECK(format_run_config(parse_run_config(text)) == text);
}

TEST_CASE("validation") {
  RunConfig c = preset_config("run1");
  CHECK_NOTHROW(validate_run_config(c, false));
  c.taggers[class_index(C::kAdverseReaction)] = TaggerKind::kRule;
  CHECK_THROWS_AS(validate_run_config(c, false), ConfigError);
  c = preset_config("run1");
  c.taggers[class_index(C::kFactor)].reset();
  CHECK_THROWS_AS(validate_run_config(c, false), ConfigError);
  c = preset_config("run1");
  c.corpus = "/definitely/not/here";
  CHECK_THROWS_AS(validate_run_config(c, true), ConfigError);
}

TEST_CASE("group planning") {
  const auto run1 = plan_groups(preset_config("run1"));
  std::vector<std::string> names;
  for (const auto& g : run1) names.push_back(g.name);
  CHECK(names == std::vector<std::string>{"crf-AdverseReaction", "blstm-all", "rule-Negation",
                                          "rule-Animal"});
  CHECK(run1[0].labels.size() == 3);
  CHECK(run1[1].labels.size() == 13);
  CHECK(run1[1].outputs == std::vector<C>{C::kSeverity, C::kFactor, C::kDrugClass});
  CHECK(run1[2].adr_context);
  CHECK_FALSE(run1[3].adr_context);
  CHECK_FALSE(run1[0].adr_context);

  RunConfig per = preset_config("run1");
  per.taggers[class_index(C::kSeverity)] = TaggerKind::kCrf;
  per.label_scope = LabelScope::kPerClass;
  const auto groups = plan_groups(per);
  bool severity_has_context = false;
  for (const auto& g : groups) {
    if (g.name == "crf-Severity") severity_has_context = g.adr_context;
  }
  CHECK(severity_has_context);
}

TEST_CASE("end-to-end run, persistence and determinism") {
  testing::TempDir dir("pipeline");
  const auto config = small_config("run1", dir.path() / "a");
  const auto result = run_pipeline(config);
  CHECK(result.split.train.size() == 7);
  CHECK(result.split.validation.size() == 3);
  CHECK(result.split.test.size() == 2);
  CHECK(result.dropped_discontinuous == 2);
  REQUIRE(result.predictions.size() == 2);
  const auto out = dir.path() / "a";
  CHECK(std::filesystem::exists(out / "report.txt"));
  CHECK(std::filesystem::exists(out / "summary.txt"));
  CHECK(std::filesystem::exists(out / "summary_without_type.txt"));
  CHECK(std::filesystem::exists(out / "models" / "crf-AdverseReaction.crf"));
  for (const auto& d : result.predictions) {
    CHECK(std::filesystem::exists(out / "annotations" / (d.doc_id + ".ann")));
    for (size_t i = 0; i < d.annotations.size(); ++i) {
      CHECK(d.annotations[i].id == "T" + std::to_string(i + 1));
    }
  }
  CHECK(result.with_type.micro.tp > 0);

  const auto reloaded = load_system(out / "models");
  const auto again = tag_documents(reloaded, result.split.test, 3);
  REQUIRE(again.size() == result.predictions.size());
  for (size_t d = 0; d < again.size(); ++d) {
    CHECK(format_standoff(again[d].annotations) == format_standoff(result.predictions[d].annotations));
  }

  auto second = small_config("run1", dir.path() / "b");
  second.jobs = 4;
  const auto result2 = run_pipeline(second);
  CHECK(result2.report == result.report);
  for (const auto& d : result.predictions) {
    CHECK(testing::read_text(out / "annotations" / (d.doc_id + ".ann")) ==
          testing::read_text(dir.path() / "b" / "annotations" / (d.doc_id + ".ann")));
  }
}

TEST_CASE("run2 with the stacked ensemble") {
  testing::TempDir dir("pipeline2");
  const auto result = run_pipeline(small_config("run2", dir.path() / "out"));
  CHECK(std::filesystem::exists(dir.path() / "out" / "models" / "stacked-all.ens"));
  CHECK(result.with_type.micro.tp + result.with_type.micro.fn > 0);
}

TEST_CASE("failed runs leave no partial output") {
  testing::TempDir dir("pipeline3");
  auto config = small_config("run1", dir.path() / "out");
  config.corpus = dir.path() / "missing";
  CHECK_THROWS(run_pipeline(config));
  CHECK_FALSE(std::filesystem::exists(dir.path() / "out" / "report.txt"));
}

}  // namespace
}  // namespace adrtag
