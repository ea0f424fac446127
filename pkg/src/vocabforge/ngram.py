"""Padded letter n-gram transition model and pseudoword sampling.

Every lexicon lemma is wrapped in n-1 ``*`` pad symbols on each side and
its n-gram windows are counted as context -> next-letter transitions.
Sampling walks those transitions from the all-pads start context until a
pad is drawn, which marks the end of the word.  Raw counts are used as-is
(no smoothing), so every sampled string stays inside letter sequences the
corpus actually attests.

Character-based scripts are first mapped to letter strings through a
transliteration table and converted back after sampling.
"""

from __future__ import annotations

import json
import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, TextIO

from .corpus import Lexicon

PAD = "*"
DEFAULT_ORDER = 5
RUNAWAY_FACTOR = 4


class NGramError(Exception):
    pass


class TransliterationError(NGramError):
    """A character has no table entry, or letters cannot be converted back."""


class ProfileError(NGramError):
    """Word contains a transition the model has never seen."""


class SampleRejected(NGramError):
    """Sampling produced a string the caller should discard and redraw."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class GenerationExhausted(NGramError):
    def __init__(self, attempts: int, accepted: int):
        rate = accepted / attempts if attempts else 0.0
        super().__init__(
            f"gave up after {attempts} samples with {accepted} accepted "
            f"(acceptance rate {rate:.4f})"
        )
        self.attempts = attempts
        self.accepted = accepted
        self.acceptance_rate = rate


class TranslitTable:
    """Bidirectional script-character <-> letter-string mapping.

    Back-conversion replaces the longest letter strings first; when two
    characters share the same letters, the one first in sorted order wins.
    """

    def __init__(self, char_to_letters: dict[str, str]):
        for char, letters in char_to_letters.items():
            if not letters or not letters.islower() or not letters.isalpha():
                raise ValueError(f"bad mapping {char!r} -> {letters!r}: "
                                 "values must be non-empty lowercase letters")
        self.char_to_letters = dict(char_to_letters)
        self._replacements = sorted(
            ((letters, char) for char, letters in self.char_to_letters.items()),
            key=lambda lc: (-len(lc[0]), lc[0], lc[1]),
        )
        # drop duplicate letter strings, keeping the sort winner
        seen: set[str] = set()
        self._replacements = [
            (letters, char) for letters, char in self._replacements
            if not (letters in seen or seen.add(letters))
        ]
        self._letter_alphabet = {ch for letters, _ in self._replacements for ch in letters}

    @classmethod
    def from_tsv(cls, source: TextIO) -> "TranslitTable":
        mapping = {}
        for lineno, line in enumerate(source, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ValueError(f"line {lineno}: expected character<TAB>letters")
            mapping[cols[0]] = cols[1]
        return cls(mapping)

    def to_letters(self, word: str) -> str:
        out = []
        for ch in word:
            try:
                out.append(self.char_to_letters[ch])
            except KeyError:
                raise TransliterationError(f"character {ch!r} not in table") from None
        return "".join(out)

    def from_letters(self, letters: str) -> str:
        """Convert letters back to script, longest letter strings first."""
        text = letters
        for seq, char in self._replacements:
            text = text.replace(seq, char)
        leftover = [ch for ch in text if ch in self._letter_alphabet]
        if leftover:
            raise TransliterationError(f"left-over letters {''.join(leftover)!r}")
        return text


def to_letters(word: str, table: TranslitTable | None = None) -> str:
    """Letter form of a word: identity without a table."""
    if not word:
        raise ValueError("empty word")
    return table.to_letters(word) if table else word


@dataclass(frozen=True)
class LogProbProfile:
    word: str
    values: tuple[float, ...]


class NGramModel:
    def __init__(self, n: int = DEFAULT_ORDER):
        if n < 2:
            raise ValueError("order must be >= 2")
        self.n = n
        self.transitions: dict[str, dict[str, int]] = {}
        self.alphabet: set[str] = {PAD}
        self.max_word_len = 0
        self._totals: dict[str, int] = {}
        self._cum: dict[str, tuple[list[str], list[int]]] = {}

    def add_word(self, letters: str):
        if PAD in letters:
            raise ValueError(f"word {letters!r} contains the pad symbol")
        pad = PAD * (self.n - 1)
        padded = pad + letters + pad
        for i in range(len(padded) - self.n + 1):
            context = padded[i:i + self.n - 1]
            nxt = padded[i + self.n - 1]
            self.transitions.setdefault(context, {})
            self.transitions[context][nxt] = self.transitions[context].get(nxt, 0) + 1
        self.alphabet.update(letters)
        self.max_word_len = max(self.max_word_len, len(letters))

    def freeze(self):
        """Precompute totals and cumulative weights for sampling."""
        self._totals = {c: sum(d.values()) for c, d in self.transitions.items()}
        self._cum = {}
        for context, dist in self.transitions.items():
            letters = sorted(dist)
            self._cum[context] = (letters, list(accumulate(dist[l] for l in letters)))

    def probability(self, context: str, letter: str) -> float:
        dist = self.transitions.get(context)
        if not dist:
            return 0.0
        return dist.get(letter, 0) / self._totals[context]

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "max_word_len": self.max_word_len,
            "transitions": self.transitions,
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "NGramModel":
        raw = json.loads(text)
        model = cls(raw["n"])
        model.transitions = {c: dict(d) for c, d in raw["transitions"].items()}
        model.max_word_len = raw["max_word_len"]
        for context, dist in model.transitions.items():
            model.alphabet.update(dist)
        model.freeze()
        return model


def build_model(lex: Lexicon, n: int = DEFAULT_ORDER,
                table: TranslitTable | None = None) -> NGramModel:
    """Count padded n-gram transitions over all (transliterated) lemmas."""
    if not lex.entries:
        raise ValueError("empty lexicon")
    model = NGramModel(n)
    for lemma in lex.entries:
        model.add_word(to_letters(lemma, table))
    model.freeze()
    return model


def logprob_profile(model: NGramModel, word: str,
                    table: TranslitTable | None = None) -> LogProbProfile:
    """Natural-log transition probabilities over the padded letter form.

    The profile has letter-length + n - 1 entries.  Raises ProfileError
    if any window was never attested: such a word is not representable.
    """
    letters = to_letters(word, table)
    pad = PAD * (model.n - 1)
    padded = pad + letters + pad
    values = []
    for i in range(len(padded) - model.n + 1):
        context = padded[i:i + model.n - 1]
        p = model.probability(context, padded[i + model.n - 1])
        if p == 0.0:
            raise ProfileError(
                f"{word!r}: transition {context!r} -> {padded[i + model.n - 1]!r} unseen"
            )
        values.append(math.log(p))
    return LogProbProfile(word, tuple(values))


def sample_pseudoword(model: NGramModel, rng: random.Random,
                      table: TranslitTable | None = None) -> str:
    """Draw one word from the transition model.

    Starts from the all-pads context, draws letters proportionally to
    their counts (each new context is the previous one shifted by the
    drawn letter), and stops when a pad is drawn.  Raises SampleRejected
    on runaway length or when back-conversion leaves letters over.
    """
    cap = max(model.max_word_len * RUNAWAY_FACTOR, model.n)
    context = PAD * (model.n - 1)
    out: list[str] = []
    while True:
        letters, cum = model._cum[context]
        nxt = letters[bisect_right(cum, rng.randrange(cum[-1]))]
        if nxt == PAD:
            break
        out.append(nxt)
        if len(out) > cap:
            raise SampleRejected("runaway")
        context = context[1:] + nxt
    raw = "".join(out)
    if table is None:
        return raw
    try:
        return table.from_letters(raw)
    except TransliterationError:
        raise SampleRejected("leftover") from None


def generate_candidates(model: NGramModel, lex: Lexicon, validator,
                        target: int, rng: random.Random,
                        table: TranslitTable | None = None,
                        max_attempts: int | None = None) -> list:
    """Sample until ``target`` unique validated pseudowords are collected.

    ``validator`` is a candidates.PseudowordValidator.  Deterministic for
    a given seeded rng.  Raises GenerationExhausted (reporting the
    acceptance rate) once the attempt cap is hit.
    """
    if target < 1:
        raise ValueError("target must be >= 1")
    cap = max_attempts if max_attempts is not None else 10_000 * target
    accepted: list = []
    seen: set[str] = set()
    attempts = 0
    while len(accepted) < target:
        if attempts >= cap:
            raise GenerationExhausted(attempts, len(accepted))
        attempts += 1
        try:
            text = sample_pseudoword(model, rng, table)
        except SampleRejected:
            continue
        if text in seen:
            continue
        result = validator.validate(text)
        if result.rejected:
            continue
        seen.add(text)
        accepted.append(result.candidate)
    return accepted
