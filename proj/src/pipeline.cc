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

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <functional>
#include <future>
#include <set>
#include <sstream>

#include "adrtag/errors.h"
#include "adrtag/log.h"
#include "adrtag/numeric_io.h"
#include "adrtag/resources.h"
#include "adrtag/structure.h"
#include "adrtag/tokenization.h"
#include "adrtag/utf8.h"
#include "file_util.h"

namespace adrtag {
namespace {

namespace fs = std::filesystem;

// Re-raises the active exception with `prefix` prepended, keeping its
// category so exit codes stay meaningful.
[[noreturn]] void rethrow_with(const std::string& prefix) {
  try {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  } catch (const TrainingError& e) {
    throw TrainingError(prefix + e.what());
  } catch (const std::exception& e) {
    throw Error(prefix + e.what());
  }
}

// ---- configuration -------------------------------------------------------

bool parse_bool(const std::string& v) {
  const std::string s = to_lower(v);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

size_t parse_size(const std::string& v) {
  long long n = 0;
  try {
    n = parse_int(v);
  } catch (const Error&) {
    throw ConfigError("expected a non-negative integer, got '" + v + "'");
  }
  if (n < 0) throw ConfigError("expected a non-negative integer, got '" + v + "'");
  return static_cast<size_t>(n);
}

double parse_real(const std::string& v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    throw ConfigError("expected a number, got '" + v + "'");
  }
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::string key;  // "section.name"
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define SIZE_FIELD(KEY, MEMBER)                                                   \
  Field {                                                                         \
    KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = parse_size(v); },    \
        [](const RunConfig& c) { return std::to_string(c.MEMBER); }               \
  }
#define REAL_FIELD(KEY, MEMBER)                                                   \
  Field {                                                                         \
    KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = parse_real(v); },    \
        [](const RunConfig& c) { return format_double(c.MEMBER); }                \
  }
#define BOOL_FIELD(KEY, MEMBER)                                                   \
  Field {                                                                         \
    KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = parse_bool(v); },    \
        [](const RunConfig& c) { return fmt_bool(c.MEMBER); }                     \
  }
#define PATH_FIELD(KEY, MEMBER)                                                   \
  Field {                                                                         \
    KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = v; },                \
        [](const RunConfig& c) { return c.MEMBER.string(); }                      \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = [] {
    std::vector<Field> f = {
        PATH_FIELD("corpus.path", corpus),
        SIZE_FIELD("split.train", split.train),
        SIZE_FIELD("split.validation", split.validation),
        SIZE_FIELD("split.test", split.test),
        SIZE_FIELD("split.seed", split.seed),
        BOOL_FIELD("split.exact", split.exact),
        SIZE_FIELD("features.window", features.window),
        BOOL_FIELD("features.pos", features.use_pos),
        BOOL_FIELD("features.semtype", features.use_semtype),
        BOOL_FIELD("features.lexicons", features.use_lexicons),
        BOOL_FIELD("features.clusters", features.use_clusters),
        SIZE_FIELD("embeddings.dim", embeddings.dim),
        SIZE_FIELD("embeddings.window", embeddings.window),
        SIZE_FIELD("embeddings.negatives", embeddings.negatives),
        SIZE_FIELD("embeddings.min_count", embeddings.min_count),
        SIZE_FIELD("embeddings.epochs", embeddings.epochs),
        REAL_FIELD("embeddings.learning_rate", embeddings.learning_rate),
        SIZE_FIELD("embeddings.seed", embeddings.seed),
        SIZE_FIELD("embeddings.clusters", clusters),
        PATH_FIELD("embeddings.generic", generic_vectors),
        PATH_FIELD("embeddings.target", target_vectors),
        PATH_FIELD("lexicons.adr", adr_lexicon),
        PATH_FIELD("lexicons.drugclass", drug_class_lexicon),
        PATH_FIELD("lexicons.semtypes", semantic_types),
        PATH_FIELD("lexicons.negation_triggers", negation_triggers),
        PATH_FIELD("lexicons.negation_ignore", negation_ignore),
        PATH_FIELD("lexicons.species", species),
        REAL_FIELD("crf.l2_sigma", crf.l2_sigma),
        SIZE_FIELD("crf.max_iters", crf.max_iters),
        REAL_FIELD("crf.tolerance", crf.tolerance),
        SIZE_FIELD("crf.memory", crf.memory),
        SIZE_FIELD("blstm.hidden", blstm.hidden),
        REAL_FIELD("blstm.learning_rate", blstm.learning_rate),
        SIZE_FIELD("blstm.epochs", blstm.epochs),
        SIZE_FIELD("blstm.patience", blstm.patience),
        SIZE_FIELD("blstm.seed", blstm.seed),
        SIZE_FIELD("blstm.batch_size", blstm.batch_size),
        REAL_FIELD("blstm.dropout", blstm.dropout),
        REAL_FIELD("blstm.rms_decay", blstm.rms_decay),
        REAL_FIELD("blstm.rms_epsilon", blstm.rms_epsilon),
        PATH_FIELD("run.output", output),
        SIZE_FIELD("run.jobs", jobs),
        Field{"run.preset", [](RunConfig& c, const std::string& v) { c.preset = v; },
              [](const RunConfig& c) { return c.preset; }},
        Field{"run.label_scope",
              [](RunConfig& c, const std::string& v) { c.label_scope = parse_label_scope(v); },
              [](const RunConfig& c) { return std::string(label_scope_name(c.label_scope)); }},
    };
    for (EntityClass cls : kAllEntityClasses) {
      f.push_back(Field{"taggers." + std::string(class_name(cls)),
                        [cls](RunConfig& c, const std::string& v) {
                          c.taggers[class_index(cls)] = parse_tagger_kind(v);
                        },
                        [cls](const RunConfig& c) {
                          auto k = c.tagger(cls);
                          return k ? std::string(tagger_kind_name(*k)) : std::string();
                        }});
    }
    return f;
  }();
  return kFields;
}

#undef SIZE_FIELD
#undef REAL_FIELD
#undef BOOL_FIELD
#undef PATH_FIELD

void set_field(RunConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      try {
        f.set(config, value);
      } catch (...) {
        rethrow_with("config key '" + key + "': ");
      }
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

// ---- documents -----------------------------------------------------------

struct PreparedUnit {
  TextUnit unit;
  std::vector<Token> tokens;
};

struct PreparedDoc {
  const AnnotatedDocument* doc = nullptr;
  std::vector<PreparedUnit> whole;
  std::vector<PreparedUnit> sub;

  const std::vector<PreparedUnit>& units(TaggerKind kind) const {
    return kind == TaggerKind::kRule ? sub : whole;
  }
};

std::vector<PreparedUnit> prepare_units(const StructuredDocument& s, SplitStrategy strategy) {
  std::vector<PreparedUnit> out;
  for (auto& u : split_document(s, strategy)) {
    auto tokens = tokenize(u.text);
    if (tokens.empty()) continue;
    out.push_back({std::move(u), std::move(tokens)});
  }
  return out;
}

PreparedDoc prepare(const AnnotatedDocument& doc) {
  PreparedDoc p;
  p.doc = &doc;
  try {
    const auto s = parse_structure(doc.text);
    p.whole = prepare_units(s, SplitStrategy::kWholeElement);
    p.sub = prepare_units(s, SplitStrategy::kSubElement);
  } catch (...) {
    rethrow_with("document '" + doc.doc_id + "': ");
  }
  return p;
}

std::vector<PreparedDoc> prepare_all(const std::vector<AnnotatedDocument>& docs) {
  std::vector<PreparedDoc> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(prepare(d));
  return out;
}

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<Span> adr_spans_of(const std::vector<MentionAnnotation>& local) {
  std::vector<Span> out;
  for (const auto& m : local) {
    if (m.cls == EntityClass::kAdverseReaction) out.insert(out.end(), m.spans.begin(), m.spans.end());
  }
  return out;
}

// Borrowed annotators and lexicons for feature extraction.
class FeatureContext {
 public:
  explicit FeatureContext(const TrainedSystem& system) : semtype_(system.semantic_types) {
    resources_.lemmatizer = &lemmatizer_;
    resources_.pos = &pos_;
    resources_.semtype = &semtype_;
    for (const auto& l : system.lexicons) resources_.lexicons.push_back(&l);
    if (system.clusters.k > 0) resources_.clusters = &system.clusters;
    config_ = system.config.features;
  }

  std::vector<FeatureVector> features(const std::vector<Token>& tokens, bool adr_context,
                                      const std::vector<Span>* adr_spans) const {
    FeatureConfig c = config_;
    c.adr_context_feature = adr_context;
    return extract_features(tokens, c, resources_, adr_context ? adr_spans : nullptr);
  }

 private:
  SuffixLemmatizer lemmatizer_;
  RulePosTagger pos_;
  LexiconSemanticTagger semtype_;
  FeatureResources resources_;
  FeatureConfig config_;
};

const WordVectors& generic_of(const TrainedSystem& s) { return s.generic ? *s.generic : s.target; }

Eigen::MatrixXd input_vectors(const TrainedSystem& s, const std::vector<Token>& tokens) {
  return build_input_vectors(surfaces(tokens), generic_of(s), s.target);
}

std::vector<size_t> gold_indices(const ModelGroup& group, const std::vector<Token>& tokens,
                                 const std::vector<MentionAnnotation>& local) {
  std::vector<BioLabel> labels =
      group.outputs.size() == 1 && group.labels.size() == 3
          ? align_annotations(tokens, local, group.outputs.front())
          : align_joint(tokens, local, group.labels.classes());
  std::vector<size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(group.labels.index_of(l));
  return out;
}

struct GroupData {
  std::vector<EnsembleExample> train;
  std::vector<EnsembleExample> validation;
};

void collect(const TrainedSystem& system, const FeatureContext& fx, const ModelGroup& group,
             const std::vector<PreparedDoc>& docs, std::vector<EnsembleExample>& out) {
  const bool want_features = group.kind != TaggerKind::kBlstm;
  const bool want_vectors = group.kind != TaggerKind::kCrf;
  for (const auto& d : docs) {
    try {
      for (const auto& u : d.units(group.kind)) {
        const auto local = project_to_unit(u.unit, d.doc->annotations);
        EnsembleExample ex;
        ex.gold = gold_indices(group, u.tokens, local);
        if (want_features) {
          const auto spans = adr_spans_of(local);
          ex.input.features = fx.features(u.tokens, group.adr_context, &spans);
        }
        if (want_vectors) ex.input.vectors = input_vectors(system, u.tokens);
        out.push_back(std::move(ex));
      }
    } catch (...) {
      rethrow_with("document '" + d.doc->doc_id + "': ");
    }
  }
}

std::vector<BlstmExample> as_blstm(const std::vector<EnsembleExample>& data) {
  std::vector<BlstmExample> out;
  for (const auto& ex : data) out.push_back({ex.input.vectors, ex.gold});
  return out;
}

std::vector<CrfInstance> as_crf(const std::vector<EnsembleExample>& data) {
  std::vector<CrfInstance> out;
  for (const auto& ex : data) out.push_back({ex.input.features, ex.gold});
  return out;
}

bool needs_vectors(const std::vector<ModelGroup>& groups) {
  return std::any_of(groups.begin(), groups.end(), [](const ModelGroup& g) {
    return g.kind == TaggerKind::kBlstm || g.kind == TaggerKind::kVoting ||
           g.kind == TaggerKind::kStacked;
  });
}

bool needs_features(const std::vector<ModelGroup>& groups) {
  return std::any_of(groups.begin(), groups.end(), [](const ModelGroup& g) {
    return g.kind == TaggerKind::kCrf || g.kind == TaggerKind::kVoting ||
           g.kind == TaggerKind::kStacked;
  });
}

Lexicon lexicon_or_bundled(const fs::path& path, std::string name, Lexicon bundled) {
  if (path.empty()) return bundled;
  return load_lexicon(path, std::move(name));
}

std::string format_phrase_types(const std::unordered_map<std::string, std::string>& types) {
  std::vector<std::pair<std::string, std::string>> rows(types.begin(), types.end());
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [p, t] : rows) out += p + "\t" + t + "\n";
  return out;
}

// ---- tagging ---------------------------------------------------------------

std::vector<size_t> predict_unit(const TrainedSystem& system, const FeatureContext& fx,
                                 const ModelGroup& group, const PreparedUnit& u,
                                 const std::vector<Span>& adr_spans) {
  switch (group.kind) {
    case TaggerKind::kCrf:
      return viterbi(system.crfs.at(group.name), fx.features(u.tokens, group.adr_context, &adr_spans));
    case TaggerKind::kBlstm:
      return argmax_rows(blstm_predict(system.blstms.at(group.name), input_vectors(system, u.tokens)));
    case TaggerKind::kVoting:
      return voting_predict(system.voting.at(group.name),
                            {fx.features(u.tokens, false, nullptr), input_vectors(system, u.tokens)});
    case TaggerKind::kStacked:
      return stacked_predict(system.stacked.at(group.name),
                             {fx.features(u.tokens, false, nullptr), input_vectors(system, u.tokens)});
    case TaggerKind::kRule:
      break;
  }
  throw ConfigError("rule groups have no statistical model");
}

void run_group(const TrainedSystem& system, const FeatureContext& fx, const ModelGroup& group,
               const PreparedDoc& doc, const std::vector<MentionAnnotation>& adr,
               std::vector<MentionAnnotation>& found) {
  auto wanted = [&](EntityClass c) {
    return std::find(group.outputs.begin(), group.outputs.end(), c) != group.outputs.end();
  };
  for (const auto& u : doc.units(group.kind)) {
    const auto adr_local = project_to_unit(u.unit, adr);
    if (group.kind == TaggerKind::kRule) {
      std::vector<MentionAnnotation> ms;
      if (wanted(EntityClass::kNegation)) {
        ms = tag_negations(u.unit, u.tokens, adr_local, system.negation);
      }
      if (wanted(EntityClass::kAnimal)) {
        auto a = tag_animals(u.unit, u.tokens, system.animals);
        ms.insert(ms.end(), a.begin(), a.end());
      }
      found.insert(found.end(), ms.begin(), ms.end());
      continue;
    }
    const auto spans = adr_spans_of(adr_local);
    const auto idx = predict_unit(system, fx, group, u, spans);
    TaggedSequence seq{u.unit, u.tokens, {}};
    for (size_t i : idx) seq.labels.push_back(group.labels[i]);
    for (auto& m : decode_mentions(seq)) {
      if (wanted(m.cls)) found.push_back(std::move(m));
    }
  }
}

AnnotatedDocument tag_one(const TrainedSystem& system, const FeatureContext& fx,
                          const AnnotatedDocument& doc) {
  const PreparedDoc p = prepare(doc);
  std::vector<MentionAnnotation> found;
  // ADR taggers and anything not depending on ADR context first.
  for (const auto& g : system.groups) {
    if (!g.adr_context) run_group(system, fx, g, p, {}, found);
  }
  std::vector<MentionAnnotation> adr;
  for (const auto& m : found) {
    if (m.cls == EntityClass::kAdverseReaction) adr.push_back(m);
  }
  for (const auto& g : system.groups) {
    if (g.adr_context) run_group(system, fx, g, p, adr, found);
  }
  std::sort(found.begin(), found.end(), [](const MentionAnnotation& a, const MentionAnnotation& b) {
    if (a.spans != b.spans) return a.spans < b.spans;
    return class_index(a.cls) < class_index(b.cls);
  });
  found.erase(std::unique(found.begin(), found.end(),
                          [](const MentionAnnotation& a, const MentionAnnotation& b) {
                            return a.spans == b.spans && a.cls == b.cls;
                          }),
              found.end());
  AnnotatedDocument out{doc.doc_id, doc.text, {}};
  for (size_t i = 0; i < found.size(); ++i) {
    found[i].id = "T" + std::to_string(i + 1);
    found[i].surface = surface_of(doc.text, found[i].spans);
  }
  out.annotations = std::move(found);
  return out;
}

}  // namespace

// ---- public: names and config ------------------------------------------------

std::string_view tagger_kind_name(TaggerKind kind) {
  switch (kind) {
    case TaggerKind::kRule: return "rule";
    case TaggerKind::kCrf: return "crf";
    case TaggerKind::kBlstm: return "blstm";
    case TaggerKind::kVoting: return "voting";
    case TaggerKind::kStacked: return "stacked";
  }
  return "?";
}

TaggerKind parse_tagger_kind(std::string_view name) {
  for (auto k : {TaggerKind::kRule, TaggerKind::kCrf, TaggerKind::kBlstm, TaggerKind::kVoting,
                 TaggerKind::kStacked}) {
    if (tagger_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown tagger '" + std::string(name) +
                    "' (expected rule, crf, blstm, voting or stacked)");
}

std::string_view label_scope_name(LabelScope scope) {
  switch (scope) {
    case LabelScope::kAll: return "all";
    case LabelScope::kAssigned: return "assigned";
    case LabelScope::kPerClass: return "per-class";
  }
  return "?";
}

LabelScope parse_label_scope(std::string_view name) {
  for (auto s : {LabelScope::kAll, LabelScope::kAssigned, LabelScope::kPerClass}) {
    if (label_scope_name(s) == name) return s;
  }
  throw ConfigError("unknown label scope '" + std::string(name) + "'");
}

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.preset = std::string(name);
  auto set = [&](EntityClass cls, TaggerKind k) { c.taggers[class_index(cls)] = k; };
  if (name == "run1") {
    set(EntityClass::kNegation, TaggerKind::kRule);
    set(EntityClass::kAnimal, TaggerKind::kRule);
    set(EntityClass::kAdverseReaction, TaggerKind::kCrf);
    set(EntityClass::kSeverity, TaggerKind::kBlstm);
    set(EntityClass::kFactor, TaggerKind::kBlstm);
    set(EntityClass::kDrugClass, TaggerKind::kBlstm);
  } else if (name == "run2") {
    set(EntityClass::kNegation, TaggerKind::kRule);
    for (EntityClass cls : {EntityClass::kAdverseReaction, EntityClass::kSeverity,
                            EntityClass::kFactor, EntityClass::kDrugClass, EntityClass::kAnimal}) {
      set(cls, TaggerKind::kStacked);
    }
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected run1 or run2)");
  }
  return c;
}

RunConfig parse_run_config(std::string_view ini, RunConfig base) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(ini)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) throw ConfigError("config key '" + section + "' is outside any section");
    for (const auto& [key, value] : entries) {
      set_field(base, section + "." + key, value.get_value<std::string>());
    }
  }
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  return parse_run_config(internal::read_file(path), std::move(base));
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not section.key=value");
  }
  set_field(config, std::string(trim(assignment.substr(0, eq))),
            std::string(trim(assignment.substr(eq + 1))));
}

std::string format_run_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string s = f.key.substr(0, dot);
    const std::string value = f.get(config);
    if (value.empty()) continue;
    if (s != section) {
      if (!out.empty()) out += "\n";
      out += "[" + s + "]\n";
      section = s;
    }
    out += f.key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

void validate_run_config(const RunConfig& config, bool check_paths) {
  for (EntityClass c : kAllEntityClasses) {
    auto k = config.tagger(c);
    if (!k) throw ConfigError("no tagger assigned to " + std::string(class_name(c)));
    if (*k == TaggerKind::kRule && c != EntityClass::kNegation && c != EntityClass::kAnimal) {
      throw ConfigError("no rule-based tagger exists for " + std::string(class_name(c)));
    }
  }
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(config.split.train + config.split.validation + config.split.test > 0,
          "split sizes are all zero");
  require(config.embeddings.dim > 0, "embeddings.dim must be positive");
  require(config.embeddings.window > 0, "embeddings.window must be positive");
  require(config.embeddings.epochs > 0, "embeddings.epochs must be positive");
  require(config.embeddings.learning_rate > 0, "embeddings.learning_rate must be positive");
  require(!config.features.use_clusters || config.clusters > 0, "embeddings.clusters must be positive");
  require(config.crf.l2_sigma > 0, "crf.l2_sigma must be positive");
  require(config.crf.memory > 0, "crf.memory must be positive");
  require(config.blstm.hidden > 0, "blstm.hidden must be positive");
  require(config.blstm.learning_rate > 0, "blstm.learning_rate must be positive");
  require(config.blstm.epochs > 0, "blstm.epochs must be positive");
  require(config.blstm.patience <= config.blstm.epochs, "blstm.patience exceeds blstm.epochs");
  require(config.blstm.batch_size > 0, "blstm.batch_size must be positive");
  require(config.blstm.dropout >= 0 && config.blstm.dropout < 1, "blstm.dropout must be in [0, 1)");
  require(config.jobs > 0, "run.jobs must be positive");
  if (!check_paths) return;
  require(!config.corpus.empty(), "corpus.path is not set");
  require(fs::is_directory(config.corpus),
          "corpus directory '" + config.corpus.string() + "' does not exist");
  for (const fs::path* p : {&config.generic_vectors, &config.target_vectors, &config.adr_lexicon,
                            &config.drug_class_lexicon, &config.semantic_types,
                            &config.negation_triggers, &config.negation_ignore, &config.species}) {
    require(p->empty() || fs::exists(*p), "configured file '" + p->string() + "' does not exist");
  }
}

std::vector<ModelGroup> plan_groups(const RunConfig& config) {
  std::vector<ModelGroup> groups;
  // Rules first for Animal, CRFs per class, then joint neural and ensemble
  // models; Negation rules and context-aware CRFs wait for ADR output.
  for (EntityClass c : kAllEntityClasses) {
    if (config.tagger(c) != TaggerKind::kCrf) continue;
    groups.push_back({"crf-" + std::string(class_name(c)), TaggerKind::kCrf, LabelSet::for_class(c),
                      {c}, c != EntityClass::kAdverseReaction});
  }
  for (TaggerKind kind : {TaggerKind::kBlstm, TaggerKind::kVoting, TaggerKind::kStacked}) {
    std::vector<EntityClass> assigned;
    for (EntityClass c : kAllEntityClasses) {
      if (config.tagger(c) == kind) assigned.push_back(c);
    }
    if (assigned.empty()) continue;
    const std::string stem(tagger_kind_name(kind));
    switch (config.label_scope) {
      case LabelScope::kAll:
        groups.push_back({stem + "-all", kind, LabelSet::joint_all(), assigned, false});
        break;
      case LabelScope::kAssigned:
        groups.push_back({stem + "-assigned", kind, LabelSet::joint(assigned), assigned, false});
        break;
      case LabelScope::kPerClass:
        for (EntityClass c : assigned) {
          groups.push_back({stem + "-" + std::string(class_name(c)), kind, LabelSet::for_class(c),
                            {c}, false});
        }
        break;
    }
  }
  std::vector<EntityClass> rules;
  for (EntityClass c : kAllEntityClasses) {
    if (config.tagger(c) == TaggerKind::kRule) rules.push_back(c);
  }
  for (EntityClass c : rules) {
    groups.push_back({"rule-" + std::string(class_name(c)), TaggerKind::kRule, LabelSet::for_class(c),
                      {c}, c == EntityClass::kNegation});
  }
  return groups;
}

// ---- training ------------------------------------------------------------

TrainedSystem train_system(const RunConfig& config, const std::vector<AnnotatedDocument>& train,
                           const std::vector<AnnotatedDocument>& validation,
                           const std::vector<AnnotatedDocument>& unlabeled_text,
                           TrainingSummary* summary) {
  validate_run_config(config, false);
  if (train.empty()) throw ValidationError("training set is empty");
  TrainedSystem s;
  s.config = config;
  s.groups = plan_groups(config);

  const auto train_docs = prepare_all(train);
  const auto val_docs = prepare_all(validation);
  const auto extra_docs = prepare_all(unlabeled_text);

  s.semantic_types = parse_phrase_types(config.semantic_types.empty()
                                            ? std::string(bundled_semantic_types_text())
                                            : internal::read_file(config.semantic_types));
  s.negation = {lexicon_or_bundled(config.negation_triggers, "negation", bundled_negation_triggers()),
                lexicon_or_bundled(config.negation_ignore, "negation_ignore", bundled_negation_ignore())};
  s.animals = {lexicon_or_bundled(config.species, "species", bundled_species())};
  s.lexicons.push_back(lexicon_or_bundled(config.adr_lexicon, "adr", bundled_adr_lexicon()));
  s.lexicons.push_back(
      lexicon_or_bundled(config.drug_class_lexicon, "drugclass", bundled_drug_class_lexicon()));
  s.lexicons.push_back(harvest_lexicon(train, EntityClass::kSeverity, "severity"));
  s.lexicons.push_back(harvest_lexicon(train, EntityClass::kFactor, "factor"));

  const bool vectors = needs_vectors(s.groups);
  const bool clusters = needs_features(s.groups) && config.features.use_clusters;
  if (vectors || clusters) {
    if (!config.target_vectors.empty()) {
      s.target = load_word_vectors(config.target_vectors);
    } else {
      std::vector<std::vector<std::string>> sentences;
      for (const auto* set : {&train_docs, &val_docs, &extra_docs}) {
        for (const auto& d : *set) {
          for (const auto& u : d.whole) {
            std::vector<std::string> words;
            for (const auto& t : u.tokens) words.push_back(to_lower(t.surface));
            sentences.push_back(std::move(words));
          }
        }
      }
      auto model = train_cbow(sentences, config.embeddings);
      if (summary) summary->embedding_loss = model.epoch_loss;
      s.target = std::move(model.input);
    }
    if (!config.generic_vectors.empty()) s.generic = load_word_vectors(config.generic_vectors);
    check_embedding_dims(generic_of(s), s.target, config.embeddings.dim);
  }
  if (clusters) s.clusters = kmeans(s.target, config.clusters, config.embeddings.seed);

  const FeatureContext fx(s);
  for (const auto& g : s.groups) {
    if (g.kind == TaggerKind::kRule) continue;
    GroupData data;
    collect(s, fx, g, train_docs, data.train);
    collect(s, fx, g, val_docs, data.validation);
    try {
      switch (g.kind) {
        case TaggerKind::kCrf: {
          CrfTrainingLog log;
          s.crfs.emplace(g.name, train_crf(g.labels, as_crf(data.train), config.crf, &log));
          if (summary) summary->crf_logs[g.name] = log;
          break;
        }
        case TaggerKind::kBlstm: {
          TrainingLog log;
          s.blstms.emplace(g.name, train_blstm(g.labels, as_blstm(data.train),
                                               as_blstm(data.validation), config.blstm, &log));
          if (summary) summary->blstm_logs[g.name] = log;
          break;
        }
        case TaggerKind::kVoting: {
          TrainingLog log;
          s.voting.emplace(g.name, voting_train(g.labels, data.train, data.validation, config.crf,
                                                config.blstm, &log));
          if (summary) summary->blstm_logs[g.name] = log;
          break;
        }
        case TaggerKind::kStacked: {
          TrainingLog log;
          s.stacked.emplace(g.name, stacked_train(g.labels, data.train, data.validation,
                                                  config.crf, config.blstm, &log));
          if (summary) summary->blstm_logs[g.name] = log;
          break;
        }
        case TaggerKind::kRule:
          break;
      }
    } catch (...) {
      rethrow_with("training " + g.name + ": ");
    }
  }
  return s;
}

std::vector<AnnotatedDocument> tag_documents(const TrainedSystem& system,
                                             const std::vector<AnnotatedDocument>& docs,
                                             size_t jobs) {
  const FeatureContext fx(system);
  std::vector<AnnotatedDocument> out(docs.size());
  auto work = [&](size_t i) {
    try {
      out[i] = tag_one(system, fx, docs[i]);
    } catch (...) {
      rethrow_with("document '" + docs[i].doc_id + "': ");
    }
  };
  jobs = std::max<size_t>(1, std::min(jobs, docs.size()));
  if (jobs == 1) {
    for (size_t i = 0; i < docs.size(); ++i) work(i);
    return out;
  }
  // Strided partition; every document lands in its own slot, so the result
  // does not depend on scheduling.
  std::vector<std::future<void>> workers;
  for (size_t j = 0; j < jobs; ++j) {
    workers.push_back(std::async(std::launch::async, [&, j] {
      for (size_t i = j; i < docs.size(); i += jobs) work(i);
    }));
  }
  for (auto& w : workers) w.get();
  return out;
}

// ---- persistence -----------------------------------------------------------

void save_system(const TrainedSystem& system, const std::filesystem::path& dir) {
  fs::create_directories(dir);
  internal::write_file(dir / "config.ini", format_run_config(system.config));
  if (system.target.size() > 0) save_word_vectors(system.target, dir / "target.vec");
  if (system.generic) save_word_vectors(*system.generic, dir / "generic.vec");
  if (system.clusters.k > 0) save_cluster_model(system.clusters, dir / "clusters.txt");
  for (const auto& l : system.lexicons) {
    internal::write_file(dir / ("lexicon-" + l.name() + ".txt"), format_lexicon(l));
  }
  internal::write_file(dir / "semtypes.tsv", format_phrase_types(system.semantic_types));
  internal::write_file(dir / "negation-triggers.txt", format_lexicon(system.negation.triggers));
  internal::write_file(dir / "negation-ignore.txt", format_lexicon(system.negation.ignore_phrases));
  internal::write_file(dir / "species.txt", format_lexicon(system.animals.species));
  for (const auto& g : system.groups) {
    switch (g.kind) {
      case TaggerKind::kCrf: save_crf(system.crfs.at(g.name), dir / (g.name + ".crf")); break;
      case TaggerKind::kBlstm: save_blstm(system.blstms.at(g.name), dir / (g.name + ".blstm")); break;
      case TaggerKind::kVoting: save_voting(system.voting.at(g.name), dir / (g.name + ".ens")); break;
      case TaggerKind::kStacked: save_stacked(system.stacked.at(g.name), dir / (g.name + ".ens")); break;
      case TaggerKind::kRule: break;
    }
  }
}

TrainedSystem load_system(const std::filesystem::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("model directory '" + dir.string() + "' does not exist");
  TrainedSystem s;
  s.config = load_run_config(dir / "config.ini");
  validate_run_config(s.config, false);
  s.groups = plan_groups(s.config);
  if (fs::exists(dir / "target.vec")) s.target = load_word_vectors(dir / "target.vec");
  if (fs::exists(dir / "generic.vec")) s.generic = load_word_vectors(dir / "generic.vec");
  if (fs::exists(dir / "clusters.txt")) s.clusters = load_cluster_model(dir / "clusters.txt");
  for (const char* name : {"adr", "drugclass", "severity", "factor"}) {
    s.lexicons.push_back(load_lexicon(dir / ("lexicon-" + std::string(name) + ".txt"), name));
  }
  s.semantic_types = parse_phrase_types(internal::read_file(dir / "semtypes.tsv"));
  s.negation = {load_lexicon(dir / "negation-triggers.txt", "negation"),
                load_lexicon(dir / "negation-ignore.txt", "negation_ignore")};
  s.animals = {load_lexicon(dir / "species.txt", "species")};
  if (needs_vectors(s.groups) && s.target.size() == 0) {
    throw ValidationError("model directory lacks target.vec");
  }
  for (const auto& g : s.groups) {
    switch (g.kind) {
      case TaggerKind::kCrf: s.crfs.emplace(g.name, load_crf(dir / (g.name + ".crf"))); break;
      case TaggerKind::kBlstm: s.blstms.emplace(g.name, load_blstm(dir / (g.name + ".blstm"))); break;
      case TaggerKind::kVoting: s.voting.emplace(g.name, load_voting(dir / (g.name + ".ens"))); break;
      case TaggerKind::kStacked: s.stacked.emplace(g.name, load_stacked(dir / (g.name + ".ens"))); break;
      case TaggerKind::kRule: break;
    }
  }
  return s;
}

// ---- end to end -------------------------------------------------------------

std::string describe_plan(const RunConfig& config) {
  std::string out;
  out += "preset: " + (config.preset.empty() ? std::string("(none)") : config.preset) + "\n";
  out += "corpus: " + config.corpus.string() + "\n";
  out += "output: " + config.output.string() + "\n";
  out += "split: " + std::to_string(config.split.train) + "/" +
         std::to_string(config.split.validation) + "/" + std::to_string(config.split.test) +
         (config.split.exact ? " documents" : " proportions") + ", seed " +
         std::to_string(config.split.seed) + "\n";
  out += "taggers:\n";
  for (EntityClass c : kAllEntityClasses) {
    auto k = config.tagger(c);
    out += "  " + std::string(class_name(c)) + ": " +
           (k ? std::string(tagger_kind_name(*k)) : std::string("(unassigned)")) + "\n";
  }
  const auto groups = plan_groups(config);
  std::vector<std::string> stages = {"load corpus", "drop discontinuous mentions",
                                     "split train/validation/test",
                                     "parse structure and tokenize"};
  if (needs_vectors(groups) || (needs_features(groups) && config.features.use_clusters)) {
    stages.push_back(config.target_vectors.empty()
                         ? "train CBOW embeddings (dim " + std::to_string(config.embeddings.dim) + ")"
                         : "load target embeddings " + config.target_vectors.string());
  }
  if (needs_features(groups) && config.features.use_clusters) {
    stages.push_back("k-means word clusters (k " + std::to_string(config.clusters) + ")");
  }
  for (const auto& g : groups) {
    if (g.kind == TaggerKind::kRule) continue;
    stages.push_back("train " + g.name + " (" + std::to_string(g.labels.size()) + " labels)");
  }
  std::string first, second;
  for (const auto& g : groups) {
    std::string& dst = g.adr_context ? second : first;
    if (!dst.empty()) dst += ", ";
    dst += g.name;
  }
  if (!first.empty()) stages.push_back("tag: " + first);
  if (!second.empty()) stages.push_back("tag with predicted ADR context: " + second);
  stages.push_back("write annotations");
  stages.push_back("evaluate against gold");
  out += "stages:\n";
  for (size_t i = 0; i < stages.size(); ++i) {
    out += "  " + std::to_string(i + 1) + ". " + stages[i] + "\n";
  }
  return out;
}

std::string format_report(const PrfScores& with_type, const PrfScores& without_type) {
  return format_scores(with_type, "Mention-level scores, entity type considered") + "\n" +
         format_scores(without_type, "Mention-level scores, entity type not considered");
}

RunResult run_pipeline(const RunConfig& config) {
  auto stage = [](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (...) {
      rethrow_with(std::string("stage '") + name + "': ");
    }
  };
  validate_run_config(config, true);
  RunResult r;
  auto docs = stage("load", [&] { return load_corpus(config.corpus); });
  auto filtered = stage("filter", [&] { return filter_discontinuous(docs); });
  r.dropped_discontinuous = filtered.dropped_count;
  if (filtered.dropped_count > 0) {
    log_warning("dropped " + std::to_string(filtered.dropped_count) + " discontinuous mention(s)");
  }
  r.split = stage("split", [&] { return split_corpus(filtered.docs, config.split); });
  // The test texts join the embedding corpus without their annotations.
  std::vector<AnnotatedDocument> test_text;
  for (const auto& d : r.split.test) test_text.push_back({d.doc_id, d.text, {}});
  TrainedSystem system = stage("train", [&] {
    return train_system(config, r.split.train, r.split.validation, test_text);
  });
  r.predictions = stage("tag", [&] { return tag_documents(system, test_text, config.jobs); });
  stage("evaluate", [&] {
    r.with_type = evaluate_documents(r.split.test, r.predictions, MatchMode::kWithType);
    r.without_type = evaluate_documents(r.split.test, r.predictions, MatchMode::kWithoutType);
    r.report = format_report(r.with_type, r.without_type);
    return 0;
  });

  // Everything is in memory; write it out and undo on failure.
  std::vector<fs::path> created;
  const bool output_existed = fs::exists(config.output);
  try {
    fs::create_directories(config.output / "annotations");
    for (const auto& d : r.predictions) {
      const fs::path p = config.output / "annotations" / (d.doc_id + ".ann");
      created.push_back(p);
      internal::write_file(p, format_standoff(d.annotations));
    }
    for (const auto& [name, content] :
         {std::pair<std::string, std::string>{"report.txt", r.report},
          {"summary.txt", format_summary(r.with_type)},
          {"summary_without_type.txt", format_summary(r.without_type)}}) {
      created.push_back(config.output / name);
      internal::write_file(config.output / name, content);
    }
    created.push_back(config.output / "models");
    save_system(system, config.output / "models");
  } catch (...) {
    std::error_code ec;
    if (!output_existed) {
      fs::remove_all(config.output, ec);
    } else {
      for (const auto& p : created) fs::remove_all(p, ec);
    }
    rethrow_with("stage 'write': ");
  }
  return r;
}

}  // namespace adrtag
