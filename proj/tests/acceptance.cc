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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "adrtag/corpus.h"
#include "adrtag/crf.h"
#include "adrtag/embeddings.h"
#include "adrtag/evaluation.h"
#include "adrtag/log.h"
#include "adrtag/numeric_io.h"
#include "adrtag/pipeline.h"
#include "adrtag/structure.h"
#include "bio_oracle.h"
#include "oracles.h"
#include "rule_fixtures.h"
#include "test_util.h"

namespace adrtag {
namespace {

namespace fs = std::filesystem;
using testing::relative_error;

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome metric_arithmetic() {
  const double a = f1_score(80.19, 72.23);
  const double b = f1_score(76.84, 74.36);
  return {std::abs(a - 76.00) <= 0.01 && std::abs(b - 75.58) <= 0.01,
          fmt("F1(80.19,72.23)=%.4f F1(76.84,74.36)=%.4f", a, b)};
}

Outcome corpus_statistics() {
  const auto docs = filter_discontinuous(
      load_corpus(testing::source_dir() / "data" / "fixture_corpus")).docs;
  const auto stats = compute_stats(docs, token_spans);
  bool ok = true;
  size_t mentions = 0;
  for (EntityClass c : kAllEntityClasses) {
    // independent recount: tokenize each mention surface span by span
    size_t tokens = 0, count = 0;
    for (const auto& d : docs) {
      for (const auto& m : d.annotations) {
        if (m.cls != c) continue;
        ++count;
        for (const Span& s : m.spans) {
          tokens += tokenize(std::u32string_view(d.text).substr(s.start, s.length())).size();
        }
      }
    }
    const auto& cs = stats[c];
    const std::string expected =
        count == 0 ? "0.00" : format_fixed(static_cast<double>(tokens) / count, 2);
    ok &= cs.mention_count == count && cs.token_count == tokens &&
          format_fixed(cs.avg_tokens_per_mention(), 2) == expected;
    mentions += count;
  }
  const std::string ratio = format_fixed(21258.0 / 12792.0, 2);
  ok &= ratio == "1.66" && mentions > 0;
  return {ok, fmt("%zu mentions checked, 21258/12792=%s", mentions, ratio.c_str())};
}

Outcome crf_exactness() {
  Rng rng(2024);
  double worst_z = 0, worst_v = 0;
  size_t path_mismatch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t L = 2 + rng.below(3);
    const size_t T = 1 + rng.below(6);
    const auto model = testing::random_crf(rng, L, 8, 2.0);
    const auto seq = testing::random_crf_sequence(rng, T, 8);
    const auto bf = testing::brute_force_crf(model, seq);
    const double z = std::exp(forward_backward(model, seq).log_partition);
    worst_z = std::max(worst_z, relative_error(z, std::exp(bf.log_partition), 0));
    const auto path = viterbi(model, seq);
    worst_v = std::max(worst_v, std::abs(score_path(model, seq, path) - bf.best_score));
    path_mismatch += path != bf.best_path;
  }
  return {worst_z <= 1e-8 && worst_v <= 1e-12,
          fmt("100 models, max rel |Z-Zbf|=%.2e, max Viterbi score gap=%.2e, paths differing=%zu",
              worst_z, worst_v, path_mismatch)};
}

Outcome crf_gradient() {
  Rng rng(31);
  const auto model = testing::random_crf(rng, 5, 20, 0.5, 3.0);
  std::vector<CrfInstance> batch;
  for (int i = 0; i < 5; ++i) {
    const size_t T = 2 + rng.below(5);
    CrfInstance inst{testing::random_crf_sequence(rng, T, 20), {}};
    for (size_t t = 0; t < T; ++t) inst.gold.push_back(rng.below(5));
    batch.push_back(inst);
  }
  const double err = testing::crf_gradient_error(model, batch);
  return {err <= 1e-4, fmt("%zu parameters, max rel error %.2e", model.num_parameters(), err)};
}

Outcome blstm_gradient() {
  Rng rng(41);
  const auto model = testing::random_blstm(rng, 3, 4, 3);
  const std::vector<BlstmExample> batch = {{testing::random_inputs(rng, 2, 4), {2, 0}}};
  const double err = testing::blstm_gradient_error(model, batch);
  return {err <= 1e-3, fmt("D=4 H=3 T=2, %zu parameters, max rel error %.2e", model.params.size(), err)};
}

Outcome normalization() {
  Rng rng(51);
  double worst_crf = 0, worst_blstm = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto crf = testing::random_crf(rng, 2 + rng.below(4), 10, 5.0);
    const auto m = forward_backward(crf, testing::random_crf_sequence(rng, 1 + rng.below(40), 10)).marginals;
    worst_crf = std::max(worst_crf, (m.rowwise().sum().array() - 1.0).abs().maxCoeff());
    const auto blstm = testing::random_blstm(rng, 2 + rng.below(4), 5, 4, 3.0);
    const auto p = blstm_predict(blstm, testing::random_inputs(rng, 1 + rng.below(40), 5));
    worst_blstm = std::max(worst_blstm, (p.rowwise().sum().array() - 1.0).abs().maxCoeff());
  }
  return {worst_crf <= 1e-10 && worst_blstm <= 1e-10,
          fmt("200 trials, max |sum-1| CRF %.2e, BLSTM %.2e", worst_crf, worst_blstm)};
}

Outcome overfit() {
  const auto start = std::chrono::steady_clock::now();
  const auto data = testing::overfit_data();
  CrfConfig crf_config;
  crf_config.max_iters = 150;
  const auto blstm_config = testing::overfit_blstm_config();

  const auto crf = train_crf(data.labels, data.crf, crf_config);
  std::vector<std::vector<size_t>> gold, crf_pred, stacked_pred;
  for (const auto& inst : data.crf) {
    gold.push_back(inst.gold);
    crf_pred.push_back(viterbi(crf, inst.features));
  }
  const double crf_acc = testing::accuracy(gold, crf_pred);
  const auto blstm = train_blstm(data.labels, data.blstm, data.blstm, blstm_config);
  const double blstm_acc = token_accuracy(blstm, data.blstm);
  const auto stacked = stacked_train(data.labels, data.ensemble, data.ensemble, crf_config, blstm_config);
  for (const auto& ex : data.ensemble) stacked_pred.push_back(stacked_predict(stacked, ex.input));
  const double stacked_acc = testing::accuracy(gold, stacked_pred);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {crf_acc >= 0.99 && blstm_acc >= 0.99 && stacked_acc >= blstm_acc - 0.01 && secs < 300,
          fmt("%zu sequences, accuracy CRF %.4f BLSTM %.4f stacked %.4f, %.1fs", data.crf.size(),
              crf_acc, blstm_acc, stacked_acc, secs)};
}

Outcome cbow() {
  const auto start = std::chrono::steady_clock::now();
  const auto corpus = generate_topic_corpus(400, 8, 2);
  const auto model = train_cbow(corpus.sentences, testing::topic_cbow_config());
  const auto margin = testing::topic_margin(model.input, corpus);

  // gradient check on a toy model with random parameters
  Word2VecConfig toy_config;
  toy_config.dim = 5;
  std::vector<std::pair<std::string, uint64_t>> vocab;
  for (int i = 0; i < 6; ++i) vocab.push_back({"w" + std::to_string(i), 10 - i});
  auto toy = init_cbow(vocab, toy_config);
  Rng rng(61);
  for (Eigen::Index i = 0; i < toy.output.size(); ++i) toy.output.data()[i] = rng.uniform(-0.8, 0.8);
  for (Eigen::Index i = 0; i < toy.input.matrix().size(); ++i) {
    toy.input.matrix().data()[i] = rng.uniform(-0.8, 0.8);
  }
  const CbowExample ex{{1, 3, 4}, 0, {2, 5, 5}};
  CbowGradient g;
  cbow_loss_and_gradient(toy, ex, &g);
  double worst = 0;
  const double h = 1e-6;
  for (int side = 0; side < 2; ++side) {
    for (Eigen::Index r = 0; r < 6; ++r) {
      for (Eigen::Index c = 0; c < 5; ++c) {
        EmbeddingModel m = toy;
        double& w = side == 0 ? m.input.matrix()(r, c) : m.output(r, c);
        const double w0 = w;
        w = w0 + h;
        const double up = cbow_loss(m, ex);
        w = w0 - h;
        const double down = cbow_loss(m, ex);
        const double analytic = side == 0 ? g.input(r, c) : g.output(r, c);
        worst = std::max(worst, relative_error((up - down) / (2 * h), analytic, 1e-7));
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {margin.margin() > 0 && worst <= 1e-4 && secs < 60,
          fmt("intra %.4f inter %.4f margin %.4f, gradient max rel error %.2e, %.1fs",
              margin.intra, margin.inter, margin.margin(), worst, secs)};
}

Outcome kmeans_check() {
  const auto start = std::chrono::steady_clock::now();
  bool monotone = true, recovered = true;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const auto points = testing::three_blobs(40, seed);
    const auto r = kmeans_points(points, 3, seed);
    for (size_t i = 1; i < r.inertia_history.size(); ++i) {
      monotone &= r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-9;
    }
    recovered &= testing::recovers_blobs(r.assignment, 40);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {monotone && recovered && secs < 5,
          fmt("10 seeds, monotone=%s recovered=%s, %.2fs", monotone ? "yes" : "no",
              recovered ? "yes" : "no", secs)};
}

Outcome structure_golden() {
  size_t ok = 0, total = 0;
  for (const char* stem : {"label_structure", "label_structure_2"}) {
    const auto dir = testing::source_dir() / "tests" / "data" / "structure";
    const auto text = to_u32(testing::read_text(dir / (std::string(stem) + ".txt")));
    ok += structure_to_json(parse_structure(text)) ==
          testing::read_text(dir / (std::string(stem) + ".json"));
    ++total;
  }
  return {ok == total, fmt("%zu/%zu golden files byte-identical", ok, total)};
}

Outcome bio_round_trip() {
  Rng rng(71);
  size_t ok = 0, mentions = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto c = testing::random_bio_case(rng);
    mentions += c.mentions.size();
    ok += testing::same_mentions(testing::bio_round_trip(c), c.mentions);
  }
  return {ok == 1000, fmt("%zu/1000 cases, %zu mentions", ok, mentions)};
}

Outcome rule_taggers() {
  using testing::negations;
  using testing::rule_fixture;
  const auto hit = negations(rule_fixture("No cases of liver failure were reported.", "liver failure"));
  const bool emitted = hit.size() == 1 && hit[0].surface == "No";
  const bool ignored =
      negations(rule_fixture("No hepatotoxicity data, not applicable", "hepatotoxicity")).empty();
  const bool no_adr = negations(rule_fixture("Not recommended for use in children.", "")).empty();
  const auto f = rule_fixture("Carcinogenicity studies in rats, mice and guinea pigs", "");
  const auto animals = tag_animals(f.unit, f.tokens, AnimalResource::bundled());
  bool single = !animals.empty();
  for (const auto& m : animals) single &= m.spans.size() == 1 && tokenize(to_u32(m.surface)).size() == 1;
  return {emitted && ignored && no_adr && single,
          fmt("negation emitted=%d ignore-suppressed=%d no-ADR-suppressed=%d, %zu single-token animals",
              emitted, ignored, no_adr, animals.size())};
}

Outcome determinism() {
  testing::TempDir dir("acceptance");
  auto run = [&](const std::string& name) {
    RunConfig config = preset_config("run1");
    config.corpus = testing::source_dir() / "data" / "fixture_corpus";
    config.output = dir.path() / name;
    run_pipeline(config);
    return dir.path() / name;
  };
  const auto a = run("a");
  const auto b = run("b");
  size_t compared = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    if (rel.begin()->string() == "models") continue;
    ++compared;
    differing += testing::read_text(entry.path()) != testing::read_text(b / rel);
  }
  const bool has_report = fs::exists(a / "report.txt");
  return {compared > 1 && differing == 0 && has_report,
          fmt("run1 twice: %zu output files compared, %zu differ", compared, differing)};
}

}  // namespace
}  // namespace adrtag

int main() {
  using namespace adrtag;
  set_warning_sink([](std::string_view) {});
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"metric_arithmetic", metric_arithmetic},
      {"corpus_statistics", corpus_statistics},
      {"crf_exactness", crf_exactness},
      {"crf_gradient", crf_gradient},
      {"blstm_gradient", blstm_gradient},
      {"normalization", normalization},
      {"overfit_sanity", overfit},
      {"cbow_sanity", cbow},
      {"kmeans", kmeans_check},
      {"structure_golden", structure_golden},
      {"bio_round_trip", bio_round_trip},
      {"rule_taggers", rule_taggers},
      {"end_to_end_determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
