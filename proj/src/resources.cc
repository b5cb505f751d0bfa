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

#include "adrtag/resources.h"

namespace adrtag {

std::string_view bundled_adr_lexicon_text() {
  return R"LEX(# adverse reaction terms
abdominal pain
agranulocytosis
alopecia
anaphylaxis
anemia
angioedema
anorexia
anxiety
arrhythmia
arthralgia
asthenia
ataxia
back pain
bleeding
blurred vision
bradycardia
bronchospasm
cardiac arrest
chest pain
confusion
constipation
convulsions
cough
death
dehydration
depression
dermatitis
diarrhea
dizziness
drowsiness
dry mouth
dyspepsia
dyspnea
edema
embryotoxicity
fatigue
fever
flatulence
hallucinations
headache
heart failure
hemorrhage
hepatotoxicity
hepatitis
hyperglycemia
hyperkalemia
hypertension
hypoglycemia
hypotension
infection
insomnia
itching
jaundice
leukopenia
liver failure
malaise
myalgia
myocardial infarction
nausea
neutropenia
pain
palpitations
pancreatitis
paresthesia
pruritus
rash
renal failure
rhabdomyolysis
seizures
somnolence
stroke
syncope
tachycardia
thrombocytopenia
tinnitus
tremor
urticaria
vertigo
vomiting
weight gain
weight loss
)LEX";
}

std::string_view bundled_drug_class_lexicon_text() {
  return R"LEX(# pharmacological drug classes
ace inhibitors
alpha blockers
aminoglycosides
analgesics
androgens
angiotensin receptor blockers
antacids
antiandrogens
antiarrhythmics
antibiotics
anticholinergics
anticoagulants
anticonvulsants
antidepressants
antidiabetics
antiemetics
antiepileptic drugs
antifungals
antihistamines
antihypertensives
antimalarials
antimetabolites
antiplatelet agents
antipsychotics
antiretrovirals
antithyroid agents
antivirals
anxiolytics
aromatase inhibitors
atypical antipsychotics
barbiturates
benzodiazepines
beta agonists
beta blockers
beta-blockers
biguanides
bisphosphonates
bronchodilators
calcium channel blockers
carbapenems
cardiac glycosides
cephalosporins
chemotherapy agents
cholinesterase inhibitors
corticosteroids
cox-2 inhibitors
cytotoxic agents
decongestants
diuretics
dopamine agonists
estrogens
fibrates
fluoroquinolones
glucocorticoids
glp-1 receptor agonists
h2 blockers
heparins
hmg-coa reductase inhibitors
hormonal contraceptives
immunosuppressants
insulin
insulins
keratolytics
laxatives
leukotriene antagonists
local anesthetics
loop diuretics
lincosamides
macrolides
mao inhibitors
monoamine oxidase inhibitors
monoclonal antibodies
mood stabilizers
mucolytics
muscle relaxants
nitrates
nonsteroidal anti-inflammatory drugs
nsaids
opioid analgesics
opioids
penicillins
phenothiazines
potassium-sparing diuretics
progestins
prostaglandins
protease inhibitors
proton pump inhibitors
sedatives
selective serotonin reuptake inhibitors
snris
ssris
statins
stimulants
sulfonamides
sulfonylureas
tetracyclines
thiazide diuretics
thiazolidinediones
thrombolytics
tricyclic antidepressants
triptans
tyrosine kinase inhibitors
vasodilators
vitamin k antagonists
)LEX";
}

std::string_view bundled_semantic_types_text() {
  return R"LEX(# phrase<TAB>semantic type
headache	sosy
nausea	sosy
vomiting	sosy
dizziness	sosy
fatigue	sosy
fever	sosy
rash	sosy
pain	sosy
pruritus	sosy
diarrhea	sosy
constipation	sosy
insomnia	sosy
anaphylaxis	patf
hepatotoxicity	patf
embryotoxicity	patf
heart failure	dsyn
renal failure	dsyn
liver failure	dsyn
hypertension	dsyn
hypotension	dsyn
pancreatitis	dsyn
neutropenia	dsyn
thrombocytopenia	dsyn
myocardial infarction	dsyn
stroke	dsyn
seizures	dsyn
severe	qlco
serious	qlco
mild	qlco
moderate	qlco
life-threatening	qlco
fatal	qlco
rat	mamm
rats	mamm
mouse	mamm
mice	mamm
dog	mamm
dogs	mamm
rabbit	mamm
rabbits	mamm
monkey	mamm
monkeys	mamm
nsaids	phsu
opioids	phsu
corticosteroids	phsu
beta blockers	phsu
anticoagulants	phsu
antidepressants	phsu
statins	phsu
aspirin	phsu
warfarin	phsu
patients	podg
children	aggp
elderly	aggp
dose	qnco
doses	qnco
)LEX";
}

std::string_view bundled_negation_triggers_text() {
  return R"LEX(# negation cues
no
not
without
absence of
denies
denied
failed to
lack of
never
)LEX";
}

std::string_view bundled_negation_ignore_text() {
  return R"LEX(# phrases that cancel a negation
not available
could not be assessed
not applicable
not been established
)LEX";
}

std::string_view bundled_species_text() {
  return R"LEX(# laboratory animal species
rat
rats
mouse
mice
dog
dogs
rabbit
rabbits
monkey
monkeys
hamster
hamsters
cat
cats
pig
pigs
minipig
minipigs
primate
primates
baboon
baboons
ferret
ferrets
gerbil
gerbils
marmoset
marmosets
macaque
macaques
cynomolgus
sheep
goat
goats
chicken
chickens
zebrafish
beagle
beagles
)LEX";
}

Lexicon bundled_adr_lexicon() { return parse_lexicon("adr", bundled_adr_lexicon_text()); }

Lexicon bundled_drug_class_lexicon() {
  return parse_lexicon("drugclass", bundled_drug_class_lexicon_text());
}

Lexicon bundled_negation_triggers() {
  return parse_lexicon("negation_triggers", bundled_negation_triggers_text());
}

Lexicon bundled_negation_ignore() {
  return parse_lexicon("negation_ignore", bundled_negation_ignore_text());
}

Lexicon bundled_species() { return parse_lexicon("species", bundled_species_text()); }

}  // namespace adrtag
