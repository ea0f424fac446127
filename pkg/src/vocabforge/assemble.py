"""Real-word selection, word/pseudoword pairing and test assembly.

Real words are drawn so their log10 corpus frequencies follow a normal
distribution fitted on reference test items (mean per language, standard
deviation pooled over all reference languages).  Words and pseudowords
with equal profile lengths are then matched greedily by the mean absolute
difference of their log transition probabilities, the pairs whose
pseudowords are least typo-like are kept, and the first pairs become the
exported test: half real items, half pseudowords.
"""

from __future__ import annotations

import json
import logging
import math
import random
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .candidates import PseudowordCandidate
from .corpus import Lexicon
from .ngram import LogProbProfile, NGramModel, TranslitTable, logprob_profile

log = logging.getLogger(__name__)

DEFAULT_ITEMS = 60
DEFAULT_BATCH = 30
DEFAULT_KEEP = 500


class AssembleError(Exception):
    pass


class InsufficientReferenceError(AssembleError):
    pass


@dataclass(frozen=True)
class FrequencyTarget:
    mu: float
    sigma: float


@dataclass(frozen=True)
class MatchedPair:
    real_word: str
    pseudo: PseudowordCandidate
    distance: float


@dataclass(frozen=True)
class TestItem:
    id: str
    text: str
    is_real: bool


@dataclass
class TestSet:
    language: str
    items: list[TestItem]
    batch_size: int
    seed: int
    pipeline_version: str

    def to_json(self) -> str:
        payload = {
            "language": self.language,
            "seed": self.seed,
            "pipeline_version": self.pipeline_version,
            "batch_size": self.batch_size,
            "items": [
                {"id": it.id, "text": it.text, "is_real": it.is_real}
                for it in self.items
            ],
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "TestSet":
        raw = json.loads(text)
        items = [TestItem(d["id"], d["text"], d["is_real"]) for d in raw["items"]]
        return cls(raw["language"], items, raw.get("batch_size", DEFAULT_BATCH),
                   raw["seed"], raw["pipeline_version"])


def profile_distance(a: LogProbProfile, b: LogProbProfile) -> float:
    """Mean absolute difference of two equal-length log-prob profiles."""
    if len(a.values) != len(b.values):
        raise ValueError("profiles differ in length")
    return float(np.mean(np.abs(np.asarray(a.values) - np.asarray(b.values))))


def fit_target(reference: dict[str, list[str]],
               lexicons: dict[str, Lexicon]) -> dict[str, FrequencyTarget]:
    """Fit per-language frequency targets from reference item lists.

    mu is the per-language mean of log10 token counts of the reference
    items resolvable in that language's lexicon; sigma is the sample
    standard deviation of the pooled resolved items of all languages.
    Missing items are skipped with a warning.
    """
    per_lang: dict[str, list[float]] = {}
    pooled: list[float] = []
    for lang, items in reference.items():
        lex = lexicons[lang]
        resolved = []
        missing = 0
        for item in items:
            entry = lex.entries.get(item.lower())
            if entry is None:
                missing += 1
                continue
            resolved.append(math.log10(entry.token_count))
        if missing:
            log.warning("%s: %d of %d reference items missing from lexicon",
                        lang, missing, len(items))
        if not resolved:
            raise InsufficientReferenceError(f"no reference item resolvable for {lang!r}")
        per_lang[lang] = resolved
        pooled.extend(resolved)
    if len(pooled) < 2:
        raise InsufficientReferenceError("fewer than 2 resolved reference items overall")
    sigma = float(np.std(pooled, ddof=1))
    if sigma == 0.0:
        raise InsufficientReferenceError("reference items have zero frequency spread")
    return {
        lang: FrequencyTarget(float(np.mean(vals)), sigma)
        for lang, vals in per_lang.items()
    }


def select_real_words(lex: Lexicon, target: FrequencyTarget, count: int,
                      rng: random.Random) -> list[str]:
    """Draw ``count`` distinct lemmas difficulty-matched to the target.

    Each draw takes t ~ Normal(mu, sigma) and picks the not-yet-chosen
    lemma whose log10 frequency is nearest to t; exact ties resolve to
    the lexicographically smallest lemma.
    """
    if count > len(lex.entries):
        raise AssembleError(f"cannot select {count} words from {len(lex.entries)} lemmas")
    ranked = sorted(
        (math.log10(e.token_count), lemma) for lemma, e in lex.entries.items()
    )
    freqs = [f for f, _ in ranked]
    used = [False] * len(ranked)
    chosen: list[str] = []
    for _ in range(count):
        t = rng.gauss(target.mu, target.sigma)
        idx = _nearest_unused(freqs, ranked, used, t)
        used[idx] = True
        chosen.append(ranked[idx][1])
    return chosen


def _nearest_unused(freqs, ranked, used, t):
    pos = bisect_left(freqs, t)
    left = pos - 1
    while left >= 0 and used[left]:
        left -= 1
    right = pos
    while right < len(freqs) and used[right]:
        right += 1
    if left < 0 and right >= len(freqs):
        raise AssembleError("lexicon exhausted")
    d_left = abs(freqs[left] - t) if left >= 0 else math.inf
    d_right = abs(freqs[right] - t) if right < len(freqs) else math.inf
    d_min = min(d_left, d_right)
    # every unused lemma at distance d_min competes; ties go lexicographic
    candidates = []
    for side, dist in ((left, d_left), (right, d_right)):
        if dist != d_min:
            continue
        value = freqs[side]
        start = bisect_left(freqs, value)
        i = start
        while i < len(freqs) and freqs[i] == value:
            if not used[i]:
                candidates.append(i)
            i += 1
    return min(candidates, key=lambda i: ranked[i][1])


def pair(words: list[str], pseudos: list[PseudowordCandidate], model: NGramModel,
         table: TranslitTable | None = None
         ) -> tuple[list[MatchedPair], list[str], list[PseudowordCandidate]]:
    """Greedy minimum-distance matching between words and pseudowords.

    Distances exist only for pairs with equal profile lengths.  The
    globally smallest distance is extracted repeatedly (ties: smaller
    word, then smaller pseudoword text) until nothing admissible remains.
    Returns (pairs, unmatched words, unmatched pseudowords).
    """
    word_profiles = {w: logprob_profile(model, w, table) for w in set(words)}
    by_len_w: dict[int, list[str]] = {}
    for w in sorted(word_profiles):
        by_len_w.setdefault(len(word_profiles[w].values), []).append(w)
    by_len_p: dict[int, list[PseudowordCandidate]] = {}
    for c in sorted(pseudos, key=lambda c: c.text):
        if c.profile is not None:
            by_len_p.setdefault(len(c.profile.values), []).append(c)

    edges = []
    for length, ws in by_len_w.items():
        cs = by_len_p.get(length)
        if not cs:
            continue
        wmat = np.array([word_profiles[w].values for w in ws])
        pmat = np.array([c.profile.values for c in cs])
        dmat = np.mean(np.abs(wmat[:, None, :] - pmat[None, :, :]), axis=2)
        for i, w in enumerate(ws):
            for j, c in enumerate(cs):
                edges.append((float(dmat[i, j]), w, c.text, c))

    edges.sort(key=lambda e: (e[0], e[1], e[2]))
    used_words: set[str] = set()
    used_pseudos: set[str] = set()
    pairs: list[MatchedPair] = []
    for dist, w, ptext, cand in edges:
        if w in used_words or ptext in used_pseudos:
            continue
        used_words.add(w)
        used_pseudos.add(ptext)
        pairs.append(MatchedPair(w, cand, dist))
    unmatched_words = [w for w in words if w not in used_words]
    unmatched_pseudos = [c for c in pseudos if c.text not in used_pseudos]
    return pairs, unmatched_words, unmatched_pseudos


def select_pairs(pairs: list[MatchedPair], keep: int = DEFAULT_KEEP) -> list[MatchedPair]:
    """Keep the pairs whose pseudowords are least similar to real words."""
    if keep > len(pairs):
        raise AssembleError(f"cannot keep {keep} of {len(pairs)} pairs")
    ranked = sorted(pairs, key=lambda p: (p.pseudo.max_fuzzy_ratio, p.distance,
                                          p.real_word, p.pseudo.text))
    return ranked[:keep]


def build_test(pairs: list[MatchedPair], items: int = DEFAULT_ITEMS,
               seed: int = 0, language: str = "en",
               pipeline_version: str = "0",
               batch_size: int = DEFAULT_BATCH) -> TestSet:
    """Emit the first items/2 pairs as a canonical, unshuffled test set.

    Items alternate real/pseudo per pair with stable ids; shuffling is
    done per session by the administering service, never here.
    """
    if items % 2 != 0:
        raise AssembleError("item count must be even")
    if len(pairs) < items // 2:
        raise AssembleError(f"need {items // 2} pairs, have {len(pairs)}")
    test_items: list[TestItem] = []
    texts: set[str] = set()
    for k, p in enumerate(pairs[: items // 2]):
        for offset, (text, is_real) in enumerate([(p.real_word, True),
                                                  (p.pseudo.text, False)]):
            if text in texts:
                raise AssembleError(f"duplicate item text {text!r}")
            texts.add(text)
            test_items.append(TestItem(f"i{2 * k + offset:03d}", text, is_real))
    return TestSet(language, test_items, batch_size, seed, pipeline_version)
