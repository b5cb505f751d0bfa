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

#include "adrtag/synthetic.h"

#include <cstdio>

#include "adrtag/random.h"
#include "adrtag/utf8.h"

namespace adrtag {
namespace {

constexpr const char* kAdrs[] = {
    "nausea", "vomiting", "headache", "dizziness", "anaphylaxis", "hypotension",
    "hepatic failure", "skin rash", "peripheral neuropathy", "bradycardia",
    "pancreatitis", "angioedema", "seizures", "neutropenia", "renal impairment",
    "QT prolongation", "lactic acidosis", "serious infections", "fatigue", "insomnia"};
constexpr const char* kSeverities[] = {"severe", "serious", "fatal", "mild", "life-threatening",
                                       "moderate"};
constexpr const char* kFactors[] = {"elderly", "pediatric", "high dose", "prolonged use",
                                    "renally impaired", "first dose"};
constexpr const char* kDrugClasses[] = {"beta-blockers", "NSAIDs", "corticosteroids",
                                        "anticoagulants", "monoamine oxidase inhibitors",
                                        "ACE inhibitors", "opioids"};
constexpr const char* kAnimals[] = {"rats", "mice", "rabbits", "dogs", "monkeys"};
constexpr const char* kHeadings[] = {"Hepatotoxicity", "Hypersensitivity Reactions",
                                     "Cardiovascular Effects", "Clinical Trials Experience",
                                     "Use in Specific Populations", "Nonclinical Toxicology"};

std::string capitalized(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

template <size_t N>
const char* pick(Rng& rng, const char* const (&items)[N]) {
  return items[rng.below(N)];
}

// Appends text while tracking code-point offsets for annotations.
class DocBuilder {
 public:
  void add(std::string_view s) { text_ += to_u32(s); }

  Span mark(EntityClass cls, std::string_view s) {
    Span sp{text_.size(), text_.size() + to_u32(s).size()};
    add(s);
    mentions_.push_back({"", cls, {sp}, std::string(s)});
    return sp;
  }

  void annotate(EntityClass cls, std::vector<Span> spans) {
    mentions_.push_back({"", cls, spans, surface_of(text_, spans)});
  }

  AnnotatedDocument finish(std::string id) {
    AnnotatedDocument doc{std::move(id), std::move(text_), std::move(mentions_)};
    for (size_t i = 0; i < doc.annotations.size(); ++i) {
      doc.annotations[i].id = "T" + std::to_string(i + 1);
    }
    return doc;
  }

 private:
  std::u32string text_;
  std::vector<MentionAnnotation> mentions_;
};

void sentence(DocBuilder& b, Rng& rng) {
  switch (rng.below(9)) {
    case 0:
      b.mark(EntityClass::kSeverity, capitalized(pick(rng, kSeverities)));
      b.add(" ");
      b.mark(EntityClass::kAdverseReaction, pick(rng, kAdrs));
      b.add(" has been reported with ");
      b.mark(EntityClass::kDrugClass, pick(rng, kDrugClasses));
      b.add(".");
      break;
    case 1:
      b.add("Cases of ");
      b.mark(EntityClass::kAdverseReaction, pick(rng, kAdrs));
      b.add(" occurred more often in ");
      b.mark(EntityClass::kFactor, pick(rng, kFactors));
      b.add(" patients.");
      break;
    case 2:
      b.mark(EntityClass::kNegation, "No");
      b.add(" cases of ");
      b.mark(EntityClass::kAdverseReaction, pick(rng, kAdrs));
      b.add(" were reported.");
      break;
    case 3:
      b.mark(EntityClass::kAdverseReaction, capitalized(pick(rng, kAdrs)));
      b.add(" was observed in ");
      b.mark(EntityClass::kAnimal, pick(rng, kAnimals));
      b.add(" given oral doses.");
      break;
    case 4:
      b.add("Patients receiving ");
      b.mark(EntityClass::kDrugClass, pick(rng, kDrugClasses));
      b.add(" may develop ");
      b.mark(EntityClass::kAdverseReaction, pick(rng, kAdrs));
      b.add(" and ");
      b.mark(EntityClass::kAdverseReaction, pick(rng, kAdrs));
      b.add(".");
      break;
    case 5:
      b.add("Dosing information is not available for ");
      b.mark(EntityClass::kFactor, pick(rng, kFactors));
      b.add(" patients.");
      break;
    case 6:
      b.add("Not recommended for use during labor.");
      break;
    case 7:
      b.add("Discontinue the drug if ");
      b.mark(EntityClass::kSeverity, pick(rng, kSeverities));
      b.add(" ");
      b.mark(EntityClass::kAdverseReaction, pick(rng, kAdrs));
      b.add(" develops.");
      break;
    default:
      b.add("Monitor patients for ");
      b.mark(EntityClass::kAdverseReaction, pick(rng, kAdrs));
      b.add(" during treatment.");
      break;
  }
}

void paragraph(DocBuilder& b, Rng& rng) {
  const size_t n = 2 + rng.below(3);
  for (size_t i = 0; i < n; ++i) {
    if (i > 0) b.add(" ");
    sentence(b, rng);
  }
  b.add("\n\n");
}

void table(DocBuilder& b, Rng& rng, int number) {
  b.add("Table " + std::to_string(number) + ". Adverse Reactions Reported in at Least 2% of Patients\n");
  b.add("Adverse Reaction\tDrug (N=120)\tPlacebo (N=118)\n");
  const size_t rows = 2 + rng.below(3);
  for (size_t r = 0; r < rows; ++r) {
    b.mark(EntityClass::kAdverseReaction, pick(rng, kAdrs));
    char buf[32];
    std::snprintf(buf, sizeof buf, "\t%zu\t%zu\n", 3 + rng.below(20), rng.below(5));
    b.add(buf);
  }
  b.add("Percentages are rounded to the nearest integer.\n\n");
}

void bullet_list(DocBuilder& b, Rng& rng) {
  b.add("The following adverse reactions are discussed in other sections:\n\n");
  const size_t items = 2 + rng.below(3);
  for (size_t i = 0; i < items; ++i) {
    b.add("* ");
    b.mark(EntityClass::kAdverseReaction, pick(rng, kAdrs));
    b.add("\n");
  }
  b.add("\n");
}

// "skin redness and swelling": the second ADR shares "skin".
void discontinuous(DocBuilder& b) {
  b.add("Reactions included ");
  const Span skin = b.mark(EntityClass::kAdverseReaction, "skin redness");
  b.add(" and ");
  const size_t start = skin.end + 5;
  b.add("swelling");
  const Span swelling{start, start + 8};
  b.annotate(EntityClass::kAdverseReaction, {Span{skin.start, skin.start + 4}, swelling});
  b.add(".\n\n");
}

}  // namespace

std::vector<AnnotatedDocument> generate_label_corpus(size_t num_docs, uint64_t seed) {
  Rng rng(seed);
  std::vector<AnnotatedDocument> docs;
  for (size_t d = 0; d < num_docs; ++d) {
    DocBuilder b;
    int section = 1;
    const size_t blocks = 2 + rng.below(2);
    for (size_t k = 0; k < blocks; ++k) {
      b.add("5." + std::to_string(section++) + " " + pick(rng, kHeadings) + "\n\n");
      paragraph(b, rng);
      switch (rng.below(3)) {
        case 0:
          table(b, rng, static_cast<int>(k + 1));
          break;
        case 1:
          bullet_list(b, rng);
          break;
        default:
          b.add("* See Warnings and Precautions.\n\n");
          break;
      }
    }
    if (rng.below(4) == 0) discontinuous(b);
    paragraph(b, rng);
    char id[32];
    std::snprintf(id, sizeof id, "label_%03zu", d + 1);
    docs.push_back(b.finish(id));
  }
  return docs;
}

TopicCorpus generate_topic_corpus(size_t num_sentences, size_t sentence_length, uint64_t seed) {
  TopicCorpus out;
  for (int i = 0; i < 10; ++i) {
    out.topic_a.push_back("alpha" + std::to_string(i));
    out.topic_b.push_back("beta" + std::to_string(i));
  }
  Rng rng(seed);
  for (size_t s = 0; s < num_sentences; ++s) {
    const auto& vocab = (s % 2 == 0) ? out.topic_a : out.topic_b;
    std::vector<std::string> sent;
    for (size_t i = 0; i < sentence_length; ++i) sent.push_back(vocab[rng.below(vocab.size())]);
    out.sentences.push_back(std::move(sent));
  }
  return out;
}

WordVectors random_word_vectors(const std::vector<std::string>& words, size_t dim, uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(words.size(), dim);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  }
  return WordVectors(words, std::move(m));
}

}  // namespace adrtag
