"""One-call pipeline: annotated corpus in, exported test out.

Chains the stages in their canonical order (lexicon build, jargon cut,
compound removal, transition model, pseudoword generation, difficulty
targeting, pairing, selection, test assembly) with a single seed driving
every random draw, so a given corpus + configuration + seed always
produces a byte-identical test file.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .assemble import (FrequencyTarget, MatchedPair, TestSet, build_test,
                       fit_target, pair, select_pairs, select_real_words)
from .candidates import PseudowordCandidate, PseudowordValidator
from .compound import (NO_COMPOUND_SPLIT_LANGS, SplitterModel,
                       remove_compounds, train_splitter)
from .corpus import (FilterConfig, Lexicon, build_lexicon, filter_jargon,
                     ingest_tokens, load_wordlist)
from .ngram import NGramModel, TranslitTable, build_model, generate_candidates

log = logging.getLogger(__name__)


@dataclass
class PipelineResult:
    lexicon: Lexicon                  # after jargon cut and compound removal
    removed_compounds: list[str]
    splitter: SplitterModel
    model: NGramModel
    pseudowords: list[PseudowordCandidate]
    target: FrequencyTarget
    pairs: list[MatchedPair]          # selected, in final order
    test: TestSet


def run(corpus_paths: list[Path], reference_path: Path,
        language: str = "en", fmt: str = "tsv",
        wordlist_path: Path | None = None,
        translit_path: Path | None = None,
        seed: int = 0, n: int = 5, n_candidates: int = 1000,
        keep: int = 500, items: int = 60,
        jargon_percentile: float = 95.0,
        split_compounds: bool = True) -> PipelineResult:
    """Run every stage and return the assembled test with intermediates."""
    membership = {}
    if wordlist_path is not None:
        with open(wordlist_path, encoding="utf-8") as fh:
            membership[language] = load_wordlist(fh)
    cfg = FilterConfig(language=language, membership_lexicons=membership,
                       jargon_percentile=jargon_percentile)

    def tokens():
        for path in corpus_paths:
            with open(path, encoding="utf-8") as fh:
                yield from ingest_tokens(fh, fmt=fmt)

    lex = build_lexicon(tokens(), cfg)
    log.info("lexicon: %d lemmas before jargon cut", len(lex))
    lex = filter_jargon(lex, cfg.jargon_percentile)
    log.info("lexicon: %d lemmas after jargon cut", len(lex))

    splitter = train_splitter(lex)
    removed: list[str] = []
    if split_compounds and language not in NO_COMPOUND_SPLIT_LANGS:
        lex, removed = remove_compounds(splitter, lex)
        log.info("compound removal dropped %d lemmas", len(removed))

    table = None
    if translit_path is not None:
        with open(translit_path, encoding="utf-8") as fh:
            table = TranslitTable.from_tsv(fh)

    model = build_model(lex, n=n, table=table)
    rng = random.Random(seed)
    validator = PseudowordValidator(lex, splitter=splitter if split_compounds else None,
                                    table=table, model=model)
    pseudos = generate_candidates(model, lex, validator, n_candidates, rng,
                                  table=table)

    with open(reference_path, encoding="utf-8") as fh:
        reference = [line.strip() for line in fh if line.strip()]
    target = fit_target({language: reference}, {language: lex})[language]
    words = select_real_words(lex, target, n_candidates, rng)

    matched, spare_words, spare_pseudos = pair(words, pseudos, model, table)
    log.info("paired %d of %d pseudowords (%d words unused)",
             len(matched), len(pseudos), len(spare_words))
    if keep > len(matched):
        log.warning("only %d pairs available, keeping all (asked for %d)",
                    len(matched), keep)
        keep = len(matched)
    selected = select_pairs(matched, keep)

    test = build_test(selected, items=items, seed=seed, language=language,
                      pipeline_version=__version__)
    return PipelineResult(lex, removed, splitter, model, pseudos, target,
                          selected, test)
