"""Shared test utilities: tiny lexicon builders, a fake clock, HTTP drivers."""

from __future__ import annotations

import json
import threading

import requests

from vocabforge.assemble import TestSet
from vocabforge.corpus import Lexicon, LexiconEntry, letter_length


def make_lexicon(entries, language="en"):
    """Lexicon from {lemma: token_count} or {lemma: (token_count, doc_count)}."""
    recs = {}
    for lemma, counts in entries.items():
        tc, dc = counts if isinstance(counts, tuple) else (counts, 1)
        recs[lemma] = LexiconEntry(lemma, tc, dc)
    lengths = [letter_length(lemma) for lemma in recs]
    return Lexicon(language, recs, min(lengths), max(lengths))


def make_key(truths, batch_size=2, language="en"):
    """TestSet with items k0, k1, ... labeled by the given truth values."""
    from vocabforge.assemble import TestItem
    items = [TestItem(f"k{i}", f"text{i}", real) for i, real in enumerate(truths)]
    return TestSet(language, items, batch_size, 0, "test")


class FakeClock:
    """Injectable clock returning seconds; advance() moves it in milliseconds."""

    def __init__(self, start_ms: int = 1_000_000_000_000):
        self.ms = start_ms

    def __call__(self) -> float:
        return self.ms / 1000.0

    def advance(self, ms: int):
        self.ms += ms


class LeakDetector:
    """Remembers whether a forbidden substring ever crossed the wire."""

    def __init__(self, needle: str = "is_real"):
        self.needle = needle
        self.leaked = False
        self._lock = threading.Lock()

    def check(self, body: str):
        if self.needle in body:
            with self._lock:
                self.leaked = True


def run_http_session(base: str, test_id: str, key: TestSet, wrong_positions,
                     detector: LeakDetector | None = None,
                     seed: int | None = None, native_lang: str | None = None):
    """Drive one full session over HTTP, answering truthfully except at
    the given trial positions.  Returns (report, intended_accuracy).

    Every payload before finish is run through the leak detector.
    """
    labels = {it.id: it.is_real for it in key.items}
    payload = {"test_id": test_id}
    if seed is not None:
        payload["seed"] = seed
    if native_lang is not None:
        payload["native_lang"] = native_lang
    # one connection per participant, like a browser would hold
    with requests.Session() as http:
        resp = http.post(f"{base}/sessions", json=payload, timeout=30)
        if detector:
            detector.check(resp.text)
        resp.raise_for_status()
        session_id = resp.json()["session_id"]
        wrong = set(wrong_positions)
        pos = 0
        while True:
            trial = http.get(f"{base}/sessions/{session_id}/next", timeout=30)
            if detector:
                detector.check(trial.text)
            trial.raise_for_status()
            body = trial.json()
            if body.get("status") == "complete":
                break
            truth = "real" if labels[body["item_id"]] else "fake"
            answer = ({"real": "fake", "fake": "real"}[truth]
                      if pos in wrong else truth)
            ack = http.post(f"{base}/sessions/{session_id}/response",
                            json={"item_id": body["item_id"], "answer": answer,
                                  "rt_ms": 250}, timeout=30)
            if detector:
                detector.check(ack.text)
            ack.raise_for_status()
            pos += 1
        report = http.post(f"{base}/sessions/{session_id}/finish", timeout=30)
        report.raise_for_status()
    n = len(key.items)
    return report.json(), (n - len(wrong & set(range(n)))) / n


def dumps_sorted(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True)


def lcs_recursive(a: str, b: str) -> int:
    """Textbook memoized LCS recursion, the oracle for the iterative DP."""
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def oracle_greedy_pairs(words, pseudos, model, table=None):
    """Literal repeated-global-argmin matching, the oracle for pair().

    Returns (word, pseudo_text, distance) triples in extraction order.
    Admissible edges need equal profile lengths; ties break on the pair
    with the smaller word, then smaller pseudoword text.
    """
    import numpy as np

    from vocabforge.ngram import logprob_profile

    profiles = {w: logprob_profile(model, w, table).values for w in set(words)}
    remaining_w = sorted(profiles)
    remaining_p = list(pseudos)
    out = []
    while True:
        best = None
        for w in remaining_w:
            wp = profiles[w]
            for c in remaining_p:
                if c.profile is None or len(c.profile.values) != len(wp):
                    continue
                d = float(np.mean(np.abs(np.asarray(wp)
                                         - np.asarray(c.profile.values))))
                key = (d, w, c.text)
                if best is None or key < best[0]:
                    best = (key, c)
        if best is None:
            break
        (d, w, _), cand = best
        out.append((w, cand.text, d))
        remaining_w.remove(w)
        remaining_p.remove(cand)
    return out


def brute_force_max_fuzzy(pseudo: str, lemmas) -> float:
    """Unrestricted scan applying the documented neighbour rule to every lemma."""
    from vocabforge.candidates import fuzzy_ratio

    def key(word):
        return (word[:3], word[-3:]) if len(word) >= 3 else (word, word)

    best = 0.0
    pk = key(pseudo)
    for lemma in lemmas:
        lk = key(lemma)
        if pk[0] != lk[0] and pk[1] != lk[1]:
            continue
        if abs(len(lemma) - len(pseudo)) > 0.1 * len(pseudo):
            continue
        best = max(best, fuzzy_ratio(pseudo, lemma))
    return best
