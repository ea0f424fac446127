"""Sample pseudowords from a padded letter transition model.

The model memorizes order-5 letter transitions over the lexicon, so
samples look like plausible nouns. Validation then throws away anything
that is secretly real, too close to real, the wrong length, or a
transparent compound.
"""

import random
from collections import Counter

from vocabforge import data
from vocabforge.candidates import PseudowordValidator
from vocabforge.compound import remove_compounds, train_splitter
from vocabforge.corpus import FilterConfig, build_lexicon, filter_jargon, ingest_tokens
from vocabforge.ngram import build_model, sample_pseudoword

paths = data.mini_en()
with open(paths["corpus"], encoding="utf-8") as fh:
    lex = filter_jargon(build_lexicon(ingest_tokens(fh), FilterConfig()))
splitter = train_splitter(lex)
lex, _ = remove_compounds(splitter, lex)

model = build_model(lex, n=5)
print(f"model: order {model.n}, {len(model.transitions)} contexts")

rng = random.Random(7)
raw = [sample_pseudoword(model, rng) for _ in range(12)]
print("raw samples:", ", ".join(raw))

validator = PseudowordValidator(lex, splitter=splitter, model=model)
rng = random.Random(7)
outcomes = Counter()
accepted = []
seen = set()
for _ in range(2000):
    text = sample_pseudoword(model, rng)
    if text in seen:
        outcomes["duplicate"] += 1
        continue
    seen.add(text)
    result = validator.validate(text)
    if result.rejected:
        outcomes[result.reason.value] += 1
    else:
        outcomes["accepted"] += 1
        accepted.append(result.candidate)

print("\noutcomes over 2000 draws:")
for reason, count in outcomes.most_common():
    print(f"  {reason:<16} {count}")

closest = max(accepted, key=lambda c: c.max_fuzzy_ratio)
print(f"\naccepted pseudoword closest to a real word: {closest.text} "
      f"(fuzzy ratio {closest.max_fuzzy_ratio})")
print("every accepted sample carries a log-probability profile of length "
      f"len(word) + {model.n - 1}, e.g. {accepted[0].text}: "
      f"{len(accepted[0].profile.values)} values")
