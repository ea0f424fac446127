"""From lexicon to a finished 60-item test, the short way.

pipeline.run chains every stage under one seed. This script runs it on
the bundled corpus, then pokes at the intermediates: the difficulty
target fitted from reference items, the word/pseudoword pairing, and
the alternating test layout.
"""

from statistics import mean

from vocabforge import data, pipeline

paths = data.mini_en()
result = pipeline.run([paths["corpus"]], paths["reference"], language="en",
                      wordlist_path=paths["wordlist"], seed=42)

t = result.target
print(f"difficulty target from reference items: "
      f"log10 frequency {t.mu:.3f} +/- {t.sigma:.3f}")

print(f"\n{len(result.pairs)} pairs selected; five closest:")
for p in result.pairs[:5]:
    print(f"  {p.real_word:<14} ~ {p.pseudo.text:<14} distance {p.distance:.4f}")
print(f"mean profile distance of kept pairs: "
      f"{mean(p.distance for p in result.pairs):.4f}")

test = result.test
reals = [it for it in test.items if it.is_real]
fakes = [it for it in test.items if not it.is_real]
print(f"\ntest {test.language} seed {test.seed}: {len(test.items)} items, "
      f"{len(reals)} real / {len(fakes)} pseudo")
print("first eight items (real words alternate with their matched fakes):")
for it in test.items[:8]:
    kind = "real " if it.is_real else "pseudo"
    print(f"  {it.id}  {kind}  {it.text}")

# the export is the wire format the service consumes
print(f"\nJSON export is {len(test.to_json())} bytes and stable under reruns")
