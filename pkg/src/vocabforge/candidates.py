"""Pseudoword admissibility checks.

A sampled string is kept only if it is not a real word, its length falls
inside the real-word length range, it does not look like a compound, and
(for character scripts) it survives transliteration.  Accepted candidates
carry their log-probability profile and the maximum fuzzy similarity to
any near-neighbour real word, both used downstream for pairing and final
selection.
"""

from __future__ import annotations

import enum
import json
import unicodedata
from collections import defaultdict
from dataclasses import dataclass
from typing import TextIO

from .compound import SplitterModel, is_compound
from .corpus import Lexicon, letter_length
from .ngram import (LogProbProfile, NGramModel, ProfileError, TranslitTable,
                    TransliterationError, logprob_profile)


class RejectReason(enum.Enum):
    REAL_WORD = "real_word"
    LENGTH = "length"
    COMPOUND = "compound"
    TRANSLIT_LEFTOVER = "translit_leftover"


@dataclass(frozen=True)
class PseudowordCandidate:
    text: str                      # script form, what a participant sees
    letters: str                   # letter form used by the n-gram model
    profile: LogProbProfile | None
    max_fuzzy_ratio: float


@dataclass(frozen=True)
class ValidationResult:
    candidate: PseudowordCandidate | None
    reason: RejectReason | None

    @property
    def rejected(self) -> bool:
        return self.reason is not None


def lcs_length(a: str, b: str) -> int:
    """Longest common subsequence length, iterative two-row DP."""
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def fuzzy_ratio(a: str, b: str) -> float:
    """Indel similarity 100 * 2*LCS / (|a|+|b|), one decimal kept."""
    if not a or not b:
        raise ValueError("fuzzy_ratio of empty string")
    return round(200.0 * lcs_length(a, b) / (len(a) + len(b)), 1)


def _affix_key(word: str) -> tuple[str, str]:
    # words shorter than 3 letters key on their full string
    return (word[:3], word[-3:]) if len(word) >= 3 else (word, word)


class FuzzyIndex:
    """Prefix/suffix buckets over lexicon lemmas for restricted fuzzy search.

    The search space for a pseudoword is every lemma sharing its first
    three or last three letters whose length differs by at most 10% of
    the pseudoword's length.
    """

    def __init__(self, lex: Lexicon):
        self.by_prefix: defaultdict[str, list[str]] = defaultdict(list)
        self.by_suffix: defaultdict[str, list[str]] = defaultdict(list)
        for lemma in lex.entries:
            pre, suf = _affix_key(lemma)
            self.by_prefix[pre].append(lemma)
            self.by_suffix[suf].append(lemma)

    def neighbours(self, pseudo: str) -> set[str]:
        pre, suf = _affix_key(pseudo)
        pool = set(self.by_prefix.get(pre, ())) | set(self.by_suffix.get(suf, ()))
        allowed = 0.1 * len(pseudo)
        return {w for w in pool if abs(len(w) - len(pseudo)) <= allowed}


def max_fuzzy(pseudo: str, lex: Lexicon, index: FuzzyIndex | None = None) -> float:
    """Maximum fuzzy ratio against the affix-and-length-restricted lemmas."""
    if not pseudo:
        raise ValueError("empty pseudoword")
    index = index or FuzzyIndex(lex)
    pool = index.neighbours(pseudo)
    if not pool:
        return 0.0
    return max(fuzzy_ratio(pseudo, w) for w in pool)


class PseudowordValidator:
    """Applies all rejection rules and decorates accepted candidates.

    ``model`` is optional: externally supplied words may contain letter
    transitions the corpus never attests, in which case the profile stays
    None (sampled strings are always representable).
    """

    def __init__(self, lex: Lexicon, splitter: SplitterModel | None = None,
                 table: TranslitTable | None = None,
                 model: NGramModel | None = None):
        self.lex = lex
        self.splitter = splitter
        self.table = table
        self.model = model
        self.index = FuzzyIndex(lex)

    def validate(self, text: str) -> ValidationResult:
        text = unicodedata.normalize("NFC", text).lower()
        if self.table is not None:
            try:
                letters = self.table.to_letters(text)
            except TransliterationError:
                return ValidationResult(None, RejectReason.TRANSLIT_LEFTOVER)
        else:
            letters = text
        if text in self.lex.entries:
            return ValidationResult(None, RejectReason.REAL_WORD)
        if not self.lex.min_len <= letter_length(text) <= self.lex.max_len:
            return ValidationResult(None, RejectReason.LENGTH)
        if self.splitter is not None and is_compound(self.splitter, self.lex, text):
            return ValidationResult(None, RejectReason.COMPOUND)
        profile = None
        if self.model is not None:
            try:
                profile = logprob_profile(self.model, text, self.table)
            except ProfileError:
                profile = None
        ratio = max_fuzzy(text, self.lex, self.index)
        return ValidationResult(PseudowordCandidate(text, letters, profile, ratio), None)


def dump_candidates(cands: list[PseudowordCandidate], sink: TextIO):
    rows = [
        {
            "text": c.text,
            "letters": c.letters,
            "profile": list(c.profile.values) if c.profile else None,
            "max_fuzzy_ratio": c.max_fuzzy_ratio,
        }
        for c in cands
    ]
    json.dump({"candidates": rows}, sink, ensure_ascii=False, sort_keys=True,
              indent=1)


def load_candidates(source: TextIO) -> list[PseudowordCandidate]:
    data = json.load(source)
    out = []
    for row in data["candidates"]:
        profile = None
        if row.get("profile") is not None:
            profile = LogProbProfile(row["text"], tuple(row["profile"]))
        out.append(PseudowordCandidate(row["text"], row["letters"], profile,
                                       row["max_fuzzy_ratio"]))
    return out
