"""Detect and remove transparent compounds before generation.

A compound like "snowball" gives a pseudoword away: strip the head and a
real word remains. The splitter learns where lemmas begin and end, then
scores every interior boundary of a word by how word-edge-like its two
sides look.
"""

from vocabforge import data
from vocabforge.compound import best_split, is_compound, remove_compounds, train_splitter
from vocabforge.corpus import FilterConfig, build_lexicon, filter_jargon, ingest_tokens

paths = data.mini_en()
with open(paths["corpus"], encoding="utf-8") as fh:
    lex = filter_jargon(build_lexicon(ingest_tokens(fh), FilterConfig()))

splitter = train_splitter(lex)
print(f"splitter trained on {len(lex)} lemmas "
      f"(n-grams up to {splitter.max_ngram} letters)")

for word in ["snowball", "crosswalk", "carrion", "antelope"]:
    decision = best_split(splitter, word)
    verdict = "compound" if is_compound(splitter, lex, word) else "simplex"
    tail = "a lemma" if decision.right in lex.entries else "not a lemma"
    print(f"  {word:<12} best split {decision.left}|{decision.right} "
          f"score {decision.score:+.3f}, tail {tail} -> {verdict}")

cleaned, removed = remove_compounds(splitter, lex)
print(f"\nremoved {len(removed)} compounds, {len(cleaned)} lemmas remain")
print(f"first few removals: {removed[:8]}")

# the parts survive even when the whole is removed
assert "snowball" in removed
assert "snow" in cleaned.entries and "ball" in cleaned.entries
print("snowball is gone; snow and ball stay")
