"""Build a noun lexicon from the bundled annotated corpus.

Walks the first pipeline stage by hand: ingest annotated tokens, keep
the well-behaved nouns, then cut corpus jargon by concentration ratio.
"""

from vocabforge import data
from vocabforge.corpus import (FilterConfig, build_lexicon, filter_jargon,
                               ingest_tokens, load_wordlist)

paths = data.mini_en()

with open(paths["wordlist"], encoding="utf-8") as fh:
    wordlist = load_wordlist(fh)
print(f"reference word list: {len(wordlist)} entries")

cfg = FilterConfig(language="en", membership_lexicons={"en": wordlist})
with open(paths["corpus"], encoding="utf-8") as fh:
    lex = build_lexicon(ingest_tokens(fh, fmt="tsv"), cfg)
print(f"accepted lemmas: {len(lex)}")
print(f"letter lengths span {lex.min_len}..{lex.max_len}")

# a jargon lemma piles its occurrences into few documents
ratios = sorted((e.token_count / e.doc_count, lemma)
                for lemma, e in lex.entries.items())
print("\nmost concentrated lemmas (token/doc ratio):")
for ratio, lemma in ratios[-5:]:
    print(f"  {lemma:<16} {ratio:6.2f}")

cut = filter_jargon(lex, percentile=95.0)
dropped = sorted(set(lex.entries) - set(cut.entries))
print(f"\njargon cut at the 95th percentile keeps {len(cut)} lemmas")
print(f"dropped {len(dropped)}, e.g. {dropped[:5]}")

common = max(cut.entries.values(), key=lambda e: e.token_count)
print(f"\nmost frequent surviving lemma: {common.lemma} "
      f"({common.token_count} tokens in {common.doc_count} documents)")
