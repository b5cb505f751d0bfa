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

#ifndef ADRTAG_PIPELINE_H_
#define ADRTAG_PIPELINE_H_

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adrtag/blstm.h"
#include "adrtag/corpus.h"
#include "adrtag/crf.h"
#include "adrtag/embeddings.h"
#include "adrtag/ensembles.h"
#include "adrtag/evaluation.h"
#include "adrtag/features.h"
#include "adrtag/lexicon.h"
#include "adrtag/rules.h"

namespace adrtag {

enum class TaggerKind { kRule, kCrf, kBlstm, kVoting, kStacked };
std::string_view tagger_kind_name(TaggerKind kind);
TaggerKind parse_tagger_kind(std::string_view name);

// Label inventory of the BLSTM and ensemble models: all six classes, only the
// classes assigned to that kind, or one model per class. CRFs are always
// per class.
enum class LabelScope { kAll, kAssigned, kPerClass };
std::string_view label_scope_name(LabelScope scope);
LabelScope parse_label_scope(std::string_view name);

struct RunConfig {
  std::string preset;  // informational
  std::filesystem::path corpus;
  std::filesystem::path output = "adrtag_out";
  SplitSpec split;
  std::array<std::optional<TaggerKind>, kNumEntityClasses> taggers{};
  LabelScope label_scope = LabelScope::kAll;

  FeatureConfig features;
  Word2VecConfig embeddings;
  size_t clusters = 50;
  std::filesystem::path generic_vectors;  // optional pre-trained model
  std::filesystem::path target_vectors;   // optional; trained on the corpus otherwise

  // Optional replacements for the bundled lexicons.
  std::filesystem::path adr_lexicon;
  std::filesystem::path drug_class_lexicon;
  std::filesystem::path semantic_types;
  std::filesystem::path negation_triggers;
  std::filesystem::path negation_ignore;
  std::filesystem::path species;

  CrfConfig crf;
  BlstmConfig blstm;
  size_t jobs = 1;

  std::optional<TaggerKind> tagger(EntityClass c) const { return taggers[class_index(c)]; }
};

// "run1": Negation and Animal by rules, ADR by CRF, Severity, Factor and
// DrugClass by one BLSTM. "run2": Negation by rules, everything else by the
// stacked ensemble.
RunConfig preset_config(std::string_view name);

// Flat INI with sections [corpus] [split] [taggers] [features] [embeddings]
// [lexicons] [crf] [blstm] [run]. Keys override `base`; unknown keys are a
// ConfigError.
RunConfig parse_run_config(std::string_view ini, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});
// Applies one "section.key=value" override.
void apply_override(RunConfig& config, std::string_view assignment);
std::string format_run_config(const RunConfig& config);

// Every class has a tagger, rules only for Negation and Animal, positive
// hyperparameters. With `check_paths`, the corpus and every configured file
// must exist. Throws ConfigError.
void validate_run_config(const RunConfig& config, bool check_paths);

// One trained model and the classes it is responsible for.
struct ModelGroup {
  std::string name;  // file stem, e.g. "crf-AdverseReaction", "blstm-all"
  TaggerKind kind = TaggerKind::kCrf;
  LabelSet labels;
  std::vector<EntityClass> outputs;
  bool adr_context = false;  // features see ADR spans; runs after ADR tagging
};

// Model groups implied by the tagger assignment, in execution order.
std::vector<ModelGroup> plan_groups(const RunConfig& config);

struct TrainedSystem {
  RunConfig config;
  std::vector<ModelGroup> groups;
  WordVectors target;
  std::optional<WordVectors> generic;  // target fills both halves when absent
  ClusterModel clusters;
  std::vector<Lexicon> lexicons;  // adr, drugclass, severity, factor
  std::unordered_map<std::string, std::string> semantic_types;
  NegationResource negation;
  AnimalResource animals;
  std::map<std::string, CrfModel> crfs;
  std::map<std::string, BlstmModel> blstms;
  std::map<std::string, VotingEnsemble> voting;
  std::map<std::string, StackedEnsemble> stacked;
};

struct TrainingSummary {
  std::map<std::string, CrfTrainingLog> crf_logs;
  std::map<std::string, TrainingLog> blstm_logs;
  std::vector<double> embedding_loss;
};

// Fits embeddings, clusters, harvested lexicons and every model group.
// `unlabeled_text` feeds the embedding model in addition to the training
// documents.
TrainedSystem train_system(const RunConfig& config, const std::vector<AnnotatedDocument>& train,
                           const std::vector<AnnotatedDocument>& validation,
                           const std::vector<AnnotatedDocument>& unlabeled_text,
                           TrainingSummary* summary = nullptr);

// Predicted mentions replace any annotations in `docs`; ids are T1, T2, ...
// in offset order.
std::vector<AnnotatedDocument> tag_documents(const TrainedSystem& system,
                                             const std::vector<AnnotatedDocument>& docs,
                                             size_t jobs = 1);

void save_system(const TrainedSystem& system, const std::filesystem::path& dir);
TrainedSystem load_system(const std::filesystem::path& dir);

struct RunResult {
  CorpusSplit split;
  std::vector<AnnotatedDocument> predictions;
  PrfScores with_type;
  PrfScores without_type;
  std::string report;
  size_t dropped_discontinuous = 0;
};

// Stage plan as printed by `run --dry-run`.
std::string describe_plan(const RunConfig& config);

std::string format_report(const PrfScores& with_type, const PrfScores& without_type);

// Load, filter, split, train, tag the test documents, evaluate. Writes
// <output>/annotations/*.ann, report.txt, summary.txt,
// summary_without_type.txt and models/ only after every stage succeeded.
RunResult run_pipeline(const RunConfig& config);

}  // namespace adrtag

#endif  // ADRTAG_PIPELINE_H_
