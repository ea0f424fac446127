"""Character n-gram position statistics for compound word detection.

The splitter tallies where letter n-grams occur inside the lexicon's
lemmas (word-begin, word-end, interior) and scores candidate split
points by how strongly the left segment looks like a word ending and the
right segment like a word beginning.  Scores live in [-1, 1]; anything
above 0 counts as a plausible boundary.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Lexicon

# Languages where most multi-character words would be flagged, so the
# splitter stays off (e.g. Chinese).
NO_COMPOUND_SPLIT_LANGS = frozenset({"zh"})

DEFAULT_MAX_NGRAM = 4
DEFAULT_MIN_SEGMENT = 3


@dataclass
class SplitterModel:
    max_ngram: int = DEFAULT_MAX_NGRAM
    min_segment_len: int = DEFAULT_MIN_SEGMENT
    begin_counts: Counter = field(default_factory=Counter)
    end_counts: Counter = field(default_factory=Counter)
    interior_counts: Counter = field(default_factory=Counter)

    def to_json(self) -> str:
        payload = {
            "max_ngram": self.max_ngram,
            "min_segment_len": self.min_segment_len,
            "begin_counts": dict(self.begin_counts),
            "end_counts": dict(self.end_counts),
            "interior_counts": dict(self.interior_counts),
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SplitterModel":
        raw = json.loads(text)
        return cls(
            raw["max_ngram"],
            raw["min_segment_len"],
            Counter(raw["begin_counts"]),
            Counter(raw["end_counts"]),
            Counter(raw["interior_counts"]),
        )


@dataclass(frozen=True)
class SplitDecision:
    score: float
    left: str
    right: str
    is_compound: bool = False


def train_splitter(lex: Lexicon, max_ngram: int = DEFAULT_MAX_NGRAM,
                   min_segment_len: int = DEFAULT_MIN_SEGMENT) -> SplitterModel:
    """Tally positional n-gram counts (lengths 2..max_ngram) over all lemmas."""
    model = SplitterModel(max_ngram, min_segment_len)
    for lemma in lex.entries:
        length = len(lemma)
        for n in range(2, max_ngram + 1):
            if length < n:
                continue
            model.begin_counts[lemma[:n]] += 1
            model.end_counts[lemma[-n:]] += 1
            for i in range(1, length - n):
                model.interior_counts[lemma[i:i + n]] += 1
    return model


def _affinity(model: SplitterModel, segment: str, at_end: bool) -> float:
    """Positional preference of a segment's boundary n-gram, in [-1, 1].

    Uses the longest n-gram (up to max_ngram) touching the split point
    that was observed anywhere; unseen at every length means 0.
    """
    position = model.end_counts if at_end else model.begin_counts
    longest = min(model.max_ngram, len(segment))
    for n in range(longest, 1, -1):
        gram = segment[-n:] if at_end else segment[:n]
        pos = position[gram]
        inte = model.interior_counts[gram]
        if pos + inte > 0:
            return (pos - inte) / (pos + inte)
    return 0.0


def best_split(model: SplitterModel, word: str) -> SplitDecision:
    """Highest-scoring internal split of ``word`` (ties go leftmost).

    Every boundary with both segments at least min_segment_len long is
    scored by the mean of the left segment's end affinity and the right
    segment's begin affinity.  Words too short to split score -1.
    """
    k = model.min_segment_len
    if len(word) < 2 * k:
        return SplitDecision(-1.0, word, "")
    best = None
    for i in range(k, len(word) - k + 1):
        left, right = word[:i], word[i:]
        score = (_affinity(model, left, at_end=True)
                 + _affinity(model, right, at_end=False)) / 2.0
        if best is None or score > best.score:
            best = SplitDecision(score, left, right)
    return best


def is_compound(model: SplitterModel, lex: Lexicon, word: str) -> bool:
    """True when a plausible boundary exists and the tail is a real word."""
    if lex.language in NO_COMPOUND_SPLIT_LANGS:
        return False
    decision = best_split(model, word)
    return decision.score > 0 and decision.right in lex.entries


def remove_compounds(model: SplitterModel, lex: Lexicon) -> tuple[Lexicon, list[str]]:
    """Single-pass compound removal over a lexicon.

    Trains-once/removes-once semantics: the model is not refreshed after
    removals.  Returns the reduced lexicon (length bounds recomputed) and
    the removed lemmas.
    """
    from .corpus import _with_length_bounds

    removed = [w for w in lex.entries if is_compound(model, lex, w)]
    if not removed:
        return lex, []
    kept = {w: e for w, e in lex.entries.items() if w not in set(removed)}
    if not kept:
        raise ValueError("compound removal emptied the lexicon")
    return _with_length_bounds(lex.language, kept), sorted(removed)
