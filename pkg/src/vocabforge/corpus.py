"""Annotated-corpus ingestion and frequency lexicon construction.

Input is a stream of (surface, lemma, UPOS, doc_id) tokens, either from
CoNLL-U files (FORM/LEMMA/UPOS columns, ``# newdoc`` document boundaries)
or from a simplified 4-column TSV.  Tokens are filtered down to usable
noun lemmas and tallied into a Lexicon; a percentile cut on the
token/document concentration ratio then strips jargon.
"""

from __future__ import annotations

import json
import math
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

UPOS_TAGS = frozenset([
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
])


class CorpusError(Exception):
    pass


class ParseError(CorpusError):
    pass


class EmptyLexiconError(CorpusError):
    pass


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    upos: str
    doc_id: str


@dataclass(frozen=True)
class LexiconEntry:
    lemma: str
    token_count: int
    doc_count: int

    @property
    def concentration_ratio(self) -> float:
        return self.token_count / self.doc_count


@dataclass
class Lexicon:
    language: str
    entries: dict[str, LexiconEntry]
    min_len: int
    max_len: int

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> str:
        payload = {
            "language": self.language,
            "min_len": self.min_len,
            "max_len": self.max_len,
            "entries": {
                e.lemma: {"token_count": e.token_count, "doc_count": e.doc_count}
                for e in self.entries.values()
            },
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=0)

    @classmethod
    def from_json(cls, text: str) -> "Lexicon":
        raw = json.loads(text)
        entries = {
            lemma: LexiconEntry(lemma, rec["token_count"], rec["doc_count"])
            for lemma, rec in raw["entries"].items()
        }
        return cls(raw["language"], entries, raw["min_len"], raw["max_len"])


@dataclass
class FilterConfig:
    """Token acceptance rules for one ingestion run."""

    language: str = "en"
    allowed_pos: frozenset[str] = frozenset({"NOUN"})
    # language code -> set of known words; empty mapping disables the check
    membership_lexicons: dict[str, set[str]] = field(default_factory=dict)
    jargon_percentile: float = 95.0

    def __post_init__(self):
        if not 0.0 < self.jargon_percentile <= 100.0:
            raise ValueError("jargon_percentile must be in (0, 100]")


def letter_length(word: str) -> int:
    """Number of Unicode letters in the NFC-normalized word."""
    return sum(1 for ch in unicodedata.normalize("NFC", word) if ch.isalpha())


def _is_letters_only(word: str) -> bool:
    norm = unicodedata.normalize("NFC", word)
    return bool(norm) and all(ch.isalpha() for ch in norm)


class SkipCounter:
    """Counts rows skipped for carrying an unknown POS tag."""

    def __init__(self):
        self.count = 0


def ingest_tokens(source: TextIO, fmt: str = "tsv",
                  skipped: SkipCounter | None = None) -> Iterator[Token]:
    """Yield Tokens from an annotated corpus stream.

    ``fmt`` is "tsv" (doc_id<TAB>surface<TAB>lemma<TAB>upos) or "conllu"
    (ten-column CoNLL-U; document boundaries come from ``# newdoc``
    comment lines).  Rows with a UPOS outside the universal inventory are
    skipped and counted on ``skipped`` when given.
    """
    if fmt == "tsv":
        return _ingest_tsv(source, skipped)
    if fmt == "conllu":
        return _ingest_conllu(source, skipped)
    raise ValueError(f"unknown corpus format: {fmt!r}")


def _ingest_tsv(source, skipped):
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise ParseError(f"line {lineno}: expected 4 tab-separated columns, got {len(cols)}")
        doc_id, surface, lemma, upos = cols
        if not surface or not lemma:
            raise ParseError(f"line {lineno}: empty surface or lemma")
        if upos not in UPOS_TAGS:
            if skipped is not None:
                skipped.count += 1
            continue
        yield Token(surface, lemma, upos, doc_id)


def _ingest_conllu(source, skipped):
    doc_id = "doc0"
    doc_counter = 0
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if line.startswith("#"):
            if line[1:].strip().startswith("newdoc"):
                doc_counter += 1
                # honor an explicit "# newdoc id = X" when present
                _, _, rest = line.partition("=")
                doc_id = rest.strip() or f"doc{doc_counter}"
            continue
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) < 4:
            raise ParseError(f"line {lineno}: expected CoNLL-U columns, got {len(cols)}")
        tok_id, form, lemma, upos = cols[0], cols[1], cols[2], cols[3]
        if "-" in tok_id or "." in tok_id:
            continue  # multiword-token ranges and empty nodes carry no counts
        if not form or not lemma or lemma == "_":
            raise ParseError(f"line {lineno}: empty surface or lemma")
        if upos not in UPOS_TAGS:
            if skipped is not None:
                skipped.count += 1
            continue
        yield Token(form, lemma, upos, doc_id)


def accept_token(token: Token, cfg: FilterConfig) -> bool:
    """Decide whether one token contributes to the lexicon.

    Accepts iff the tag is allowed (proper nouns never are), the surface
    is not written in all capitals, the lemma is letters-only with at
    least two letters, and the lemma is present in a configured word list
    for the target language (vacuously true when no list is configured).
    """
    if token.upos == "PROPN" or token.upos not in cfg.allowed_pos:
        return False
    if token.surface.isupper():
        return False
    lemma = unicodedata.normalize("NFC", token.lemma)
    if not _is_letters_only(lemma) or letter_length(lemma) < 2:
        return False
    wordlist = cfg.membership_lexicons.get(cfg.language)
    if wordlist is not None and lemma.lower() not in wordlist:
        return False
    return True


def build_lexicon(tokens: Iterable[Token], cfg: FilterConfig) -> Lexicon:
    """Tally accepted tokens into a Lexicon keyed by lowercase lemma."""
    counts: Counter[str] = Counter()
    docs: defaultdict[str, set[str]] = defaultdict(set)
    for tok in tokens:
        if not accept_token(tok, cfg):
            continue
        lemma = unicodedata.normalize("NFC", tok.lemma).lower()
        counts[lemma] += 1
        docs[lemma].add(tok.doc_id)
    if not counts:
        raise EmptyLexiconError("no token survived the acceptance filters")
    entries = {
        lemma: LexiconEntry(lemma, n, len(docs[lemma])) for lemma, n in counts.items()
    }
    return _with_length_bounds(cfg.language, entries)


def _with_length_bounds(language: str, entries: dict[str, LexiconEntry]) -> Lexicon:
    lengths = [letter_length(lemma) for lemma in entries]
    return Lexicon(language, entries, min(lengths), max(lengths))


def nearest_rank_percentile(values: list[float], percentile: float) -> float:
    """Nearest-rank percentile of a non-empty list (inclusive threshold)."""
    if not values:
        raise ValueError("percentile of empty list")
    ranked = sorted(values)
    rank = math.ceil(percentile / 100.0 * len(ranked))
    return ranked[max(rank, 1) - 1]


def filter_jargon(lex: Lexicon, percentile: float = 95.0) -> Lexicon:
    """Drop entries whose concentration ratio exceeds the percentile threshold.

    Words piled up in few documents are jargon; the entries at or below
    the nearest-rank percentile of all ratios are kept, so ties at the
    threshold survive.
    """
    if not lex.entries:
        raise EmptyLexiconError("cannot filter an empty lexicon")
    if not 0.0 < percentile <= 100.0:
        raise ValueError("percentile must be in (0, 100]")
    threshold = nearest_rank_percentile(
        [e.concentration_ratio for e in lex.entries.values()], percentile
    )
    kept = {
        lemma: e for lemma, e in lex.entries.items() if e.concentration_ratio <= threshold
    }
    return _with_length_bounds(lex.language, kept)


def load_wordlist(source: TextIO) -> set[str]:
    """Read a one-word-per-line UTF-8 word list, lowercased and NFC-normalized."""
    words = set()
    for line in source:
        word = line.strip()
        if word:
            words.add(unicodedata.normalize("NFC", word).lower())
    return words
