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

// adrtag command-line front end.
//
//   adrtag parse FILE [--units whole|sub]
//   adrtag stats CORPUS [--keep-discontinuous]
//   adrtag embed CORPUS --vectors OUT --clusters OUT [...]
//   adrtag train --corpus DIR --models DIR [--preset P] [--config INI] [--set k=v]...
//   adrtag tag --models DIR --input DIR --output DIR [--jobs N]
//   adrtag eval --gold DIR --pred DIR [--mode with-type|without-type|both] [--summary FILE]
//   adrtag run --preset run1|run2 [--corpus DIR] [--output DIR] [--config INI] [--dry-run]
//   adrtag synth --out DIR [--docs N] [--seed S]
//
// Exit status: 0 success, 1 usage, 2 invalid input or configuration,
// 3 runtime failure.

#include "CLI11.hpp"
#include <fstream>
#include <iostream>
#include "json.hpp"

#include "adrtag/corpus.h"
#include "adrtag/embeddings.h"
#include "adrtag/errors.h"
#include "adrtag/evaluation.h"
#include "adrtag/pipeline.h"
#include "adrtag/structure.h"
#include "adrtag/synthetic.h"
#include "adrtag/tokenization.h"
#include "adrtag/utf8.h"

namespace {

using namespace adrtag;
namespace fs = std::filesystem;

constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kRuntime = 3;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << content)) throw IoError("cannot write '" + p.string() + "'");
}

void cmd_parse(const std::string& file, const std::string& units) {
  const auto text = to_u32(slurp(file));
  const auto doc = parse_structure(text);
  if (units.empty()) {
    std::cout << structure_to_json(doc);
    return;
  }
  const auto strategy = units == "whole" ? SplitStrategy::kWholeElement : SplitStrategy::kSubElement;
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& u : split_document(doc, strategy)) {
    nlohmann::ordered_json j;
    j["element"] = u.origin.element;
    if (u.origin.sub_index) j["sub_index"] = *u.origin.sub_index;
    j["start"] = u.doc_offset;
    j["text"] = to_utf8(u.text);
    out.push_back(j);
  }
  std::cout << out.dump(2) << "\n";
}

void cmd_stats(const std::string& corpus, bool keep_discontinuous) {
  auto docs = load_corpus(corpus);
  if (!keep_discontinuous) {
    auto filtered = filter_discontinuous(docs);
    if (filtered.dropped_count > 0) {
      std::cerr << "dropped " << filtered.dropped_count << " discontinuous mention(s)\n";
    }
    docs = std::move(filtered.docs);
  }
  std::cout << format_stats(compute_stats(docs, token_spans));
}

struct EmbedArgs {
  std::string corpus;
  std::string vectors;
  std::string clusters;
  Word2VecConfig w2v;
  size_t k = 50;
};

void cmd_embed(const EmbedArgs& a) {
  const auto docs = load_corpus(a.corpus, AnnotationFormat::kStandoff, false);
  std::vector<std::vector<std::string>> sentences;
  for (const auto& d : docs) {
    for (const auto& u : split_document(parse_structure(d.text), SplitStrategy::kWholeElement)) {
      std::vector<std::string> words;
      for (const auto& t : tokenize(u.text)) words.push_back(to_lower(t.surface));
      if (!words.empty()) sentences.push_back(std::move(words));
    }
  }
  auto model = train_cbow(sentences, a.w2v);
  for (size_t e = 0; e < model.epoch_loss.size(); ++e) {
    std::cerr << "epoch " << e + 1 << " loss " << model.epoch_loss[e] << "\n";
  }
  save_word_vectors(model.input, a.vectors);
  if (!a.clusters.empty()) save_cluster_model(kmeans(model.input, a.k, a.w2v.seed), a.clusters);
  std::cout << "vocabulary " << model.input.size() << ", dim " << model.input.dim() << "\n";
}

RunConfig resolve_config(const std::string& preset, const std::string& config_file,
                         const std::vector<std::string>& overrides) {
  RunConfig c = preset.empty() ? RunConfig{} : preset_config(preset);
  if (!config_file.empty()) c = load_run_config(config_file, c);
  for (const auto& o : overrides) apply_override(c, o);
  return c;
}

void cmd_train(const RunConfig& config, const std::string& models) {
  validate_run_config(config, true);
  const auto docs = filter_discontinuous(load_corpus(config.corpus)).docs;
  const auto split = split_corpus(docs, config.split);
  TrainingSummary summary;
  const auto system = train_system(config, split.train, split.validation, {}, &summary);
  save_system(system, models);
  for (const auto& [name, log] : summary.crf_logs) {
    std::cout << name << ": " << log.iterations << " iterations, loss "
              << (log.loss.empty() ? 0.0 : log.loss.back()) << "\n";
  }
  for (const auto& [name, log] : summary.blstm_logs) {
    std::cout << name << ": best epoch " << log.best_epoch << ", validation F1 "
              << log.best_validation_f1 << "\n";
  }
}

void cmd_tag(const std::string& models, const std::string& input, const std::string& output,
             size_t jobs) {
  const auto system = load_system(models);
  auto docs = load_corpus(input, AnnotationFormat::kStandoff, false);
  for (auto& d : docs) d.annotations.clear();
  const auto tagged = tag_documents(system, docs, jobs);
  std::vector<std::pair<fs::path, std::string>> files;
  for (const auto& d : tagged) {
    files.emplace_back(fs::path(output) / (d.doc_id + ".ann"), format_standoff(d.annotations));
  }
  fs::create_directories(output);
  for (const auto& [p, c] : files) spill(p, c);
  std::cout << "tagged " << tagged.size() << " document(s)\n";
}

void cmd_eval(const std::string& gold_dir, const std::string& pred_dir, const std::string& mode,
              const std::string& summary_path) {
  const auto gold = filter_discontinuous(load_corpus(gold_dir)).docs;
  // Predictions are .ann files; texts come from the gold side.
  std::vector<AnnotatedDocument> pred;
  for (const auto& g : gold) {
    const fs::path ann = fs::path(pred_dir) / (g.doc_id + ".ann");
    if (!fs::exists(ann)) continue;
    pred.push_back({g.doc_id, g.text, parse_standoff(slurp(ann), g.text, g.doc_id)});
  }
  std::string summary;
  if (mode == "with-type" || mode == "both") {
    const auto s = evaluate_documents(gold, pred, MatchMode::kWithType);
    std::cout << format_scores(s, "Entity type considered");
    summary += format_summary(s);
  }
  if (mode == "both") std::cout << "\n";
  if (mode == "without-type" || mode == "both") {
    const auto s = evaluate_documents(gold, pred, MatchMode::kWithoutType);
    std::cout << format_scores(s, "Entity type not considered");
    auto rows = format_summary(s);
    // Only the micro row exists without types; name it apart in dual mode.
    if (mode == "both") rows.replace(0, 5, "micro_without_type");
    summary += rows;
  }
  if (!summary_path.empty()) spill(summary_path, summary);
}

void cmd_run(const RunConfig& config, bool dry_run) {
  if (dry_run) {
    validate_run_config(config, false);
    std::cout << describe_plan(config);
    return;
  }
  const auto r = run_pipeline(config);
  std::cout << r.report;
  std::cout << "annotations written to " << (config.output / "annotations").string() << "\n";
}

void cmd_synth(const std::string& out, size_t docs, uint64_t seed) {
  write_corpus(generate_label_corpus(docs, seed), out);
  std::cout << "wrote " << docs << " document(s) to " << out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adverse drug reaction tagging toolkit"};
  app.require_subcommand(1);

  std::string parse_file, parse_units;
  auto* parse = app.add_subcommand("parse", "Print the recovered document structure as JSON");
  parse->add_option("file", parse_file, "Plain-text document")->required()->check(CLI::ExistingFile);
  parse->add_option("--units", parse_units, "Print text units instead")
      ->check(CLI::IsMember({"whole", "sub"}));

  std::string stats_corpus;
  bool keep_discontinuous = false;
  auto* stats = app.add_subcommand("stats", "Per-class mention and token counts");
  stats->add_option("corpus", stats_corpus, "Corpus directory (.txt + .ann)")->required();
  stats->add_flag("--keep-discontinuous", keep_discontinuous, "Count discontinuous mentions too");

  EmbedArgs embed_args;
  auto* embed = app.add_subcommand("embed", "Train CBOW word vectors and k-means clusters");
  embed->add_option("corpus", embed_args.corpus, "Directory of .txt files")->required();
  embed->add_option("--vectors", embed_args.vectors, "Output vector file")->required();
  embed->add_option("--clusters", embed_args.clusters, "Output cluster file");
  embed->add_option("--dim", embed_args.w2v.dim)->capture_default_str();
  embed->add_option("--window", embed_args.w2v.window)->capture_default_str();
  embed->add_option("--negatives", embed_args.w2v.negatives)->capture_default_str();
  embed->add_option("--min-count", embed_args.w2v.min_count)->capture_default_str();
  embed->add_option("--epochs", embed_args.w2v.epochs)->capture_default_str();
  embed->add_option("--lr", embed_args.w2v.learning_rate)->capture_default_str();
  embed->add_option("--seed", embed_args.w2v.seed)->capture_default_str();
  embed->add_option("-k", embed_args.k, "Number of clusters")->capture_default_str();

  std::string preset, config_file, corpus_dir, output_dir, models_dir;
  std::vector<std::string> overrides;
  size_t jobs = 1;
  bool dry_run = false;
  auto add_config_options = [&](CLI::App* sub) {
    sub->add_option("--preset", preset, "run1 or run2")->check(CLI::IsMember({"run1", "run2"}));
    sub->add_option("--config", config_file, "INI run configuration")->check(CLI::ExistingFile);
    sub->add_option("--corpus", corpus_dir, "Annotated corpus directory");
    sub->add_option("--set", overrides, "section.key=value override (repeatable)");
    sub->add_option("--jobs", jobs, "Worker threads for tagging")->capture_default_str();
  };
  auto* train = app.add_subcommand("train", "Fit the configured taggers and save them");
  add_config_options(train);
  train->add_option("--models", models_dir, "Output model directory")->required();

  std::string tag_input;
  auto* tag = app.add_subcommand("tag", "Annotate plain-text documents with a trained system");
  tag->add_option("--models", models_dir, "Model directory from 'train'")->required();
  tag->add_option("--input", tag_input, "Directory of .txt files")->required();
  tag->add_option("--output", output_dir, "Directory for .ann files")->required();
  tag->add_option("--jobs", jobs, "Worker threads")->capture_default_str();

  std::string gold_dir, pred_dir, eval_mode = "with-type", summary_path;
  auto* eval = app.add_subcommand("eval", "Score predicted annotations against gold");
  eval->add_option("--gold", gold_dir, "Gold corpus directory")->required();
  eval->add_option("--pred", pred_dir, "Directory of predicted .ann files")->required();
  eval->add_option("--mode", eval_mode)
      ->check(CLI::IsMember({"with-type", "without-type", "both"}))
      ->capture_default_str();
  eval->add_option("--summary", summary_path, "Write 'class tp fp fn P R F1' lines here");

  auto* run = app.add_subcommand("run", "Train, tag and evaluate end to end");
  add_config_options(run);
  run->add_option("--output", output_dir, "Output directory");
  run->add_flag("--dry-run", dry_run, "Print the stage plan and exit");

  std::string synth_out;
  size_t synth_docs = 12;
  uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "Write a synthetic annotated corpus");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--docs", synth_docs)->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    auto config = [&] {
      RunConfig c = resolve_config(preset, config_file, overrides);
      if (!corpus_dir.empty()) c.corpus = corpus_dir;
      if (!output_dir.empty()) c.output = output_dir;
      if (jobs != 1) c.jobs = jobs;
      return c;
    };
    if (*parse) {
      cmd_parse(parse_file, parse_units);
    } else if (*stats) {
      cmd_stats(stats_corpus, keep_discontinuous);
    } else if (*embed) {
      cmd_embed(embed_args);
    } else if (*train) {
      cmd_train(config(), models_dir);
    } else if (*tag) {
      cmd_tag(models_dir, tag_input, output_dir, jobs);
    } else if (*eval) {
      cmd_eval(gold_dir, pred_dir, eval_mode, summary_path);
    } else if (*run) {
      if (preset.empty() && config_file.empty()) {
        std::cerr << "run: give --preset or --config\n";
        return kUsage;
      }
      cmd_run(config(), dry_run);
    } else if (*synth) {
      cmd_synth(synth_out, synth_docs, synth_seed);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return 0;
}
