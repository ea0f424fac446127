"""Session scoring and the test's reliability/validity statistics."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .assemble import TestSet

ANSWERS = ("real", "fake", "timeout")


class ScoringError(Exception):
    pass


class UndefinedCorrelationError(ScoringError):
    pass


@dataclass
class ScoreReport:
    session_id: str
    accuracy: float
    batch_accuracies: list[float]
    hit_rate: float
    correct_rejection_rate: float
    n_trials: int
    n_missed: int

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "accuracy": self.accuracy,
            "batch_accuracies": self.batch_accuracies,
            "hit_rate": self.hit_rate,
            "correct_rejection_rate": self.correct_rejection_rate,
            "n_trials": self.n_trials,
            "n_missed": self.n_missed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def score_session(session_id: str, responses: Iterable, key: TestSet,
                  batch_size: int | None = None) -> ScoreReport:
    """Score one session's trial responses against the answer key.

    Each response needs item_id, answer ("real"/"fake"/"timeout") and,
    for batch assignment, served_at; responses are batched in served
    order (falling back to the key's item order when any served_at is
    missing), so the response list may arrive in any order.  Timeouts
    count as incorrect and as missed.
    """
    responses = list(responses)
    if not responses:
        raise ScoringError("no responses to score")
    batch_size = batch_size or key.batch_size
    labels = {item.id: item.is_real for item in key.items}
    key_pos = {item.id: i for i, item in enumerate(key.items)}

    seen = set()
    for r in responses:
        if r.item_id not in labels:
            raise ScoringError(f"unknown item id {r.item_id!r}")
        if r.item_id in seen:
            raise ScoringError(f"duplicate response for {r.item_id!r}")
        if r.answer not in ANSWERS:
            raise ScoringError(f"bad answer {r.answer!r}")
        seen.add(r.item_id)

    if all(getattr(r, "served_at", None) is not None for r in responses):
        ordered = sorted(responses, key=lambda r: (r.served_at, r.item_id))
    else:
        ordered = sorted(responses, key=lambda r: key_pos[r.item_id])

    n_correct = n_missed = hits = real_seen = rejections = pseudo_seen = 0
    n_batches = math.ceil(len(ordered) / batch_size)
    batch_correct = [0] * n_batches
    batch_total = [0] * n_batches
    for pos, r in enumerate(ordered):
        is_real = labels[r.item_id]
        correct = (r.answer == "real" and is_real) or (r.answer == "fake" and not is_real)
        if r.answer == "timeout":
            n_missed += 1
        if is_real:
            real_seen += 1
            hits += int(correct)
        else:
            pseudo_seen += 1
            rejections += int(correct)
        n_correct += int(correct)
        b = pos // batch_size
        batch_correct[b] += int(correct)
        batch_total[b] += 1

    return ScoreReport(
        session_id=session_id,
        accuracy=n_correct / len(ordered),
        batch_accuracies=[c / t for c, t in zip(batch_correct, batch_total)],
        hit_rate=hits / real_seen if real_seen else 0.0,
        correct_rejection_rate=rejections / pseudo_seen if pseudo_seen else 0.0,
        n_trials=len(ordered),
        n_missed=n_missed,
    )


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson product-moment correlation."""
    if len(x) != len(y):
        raise ScoringError("vectors differ in length")
    if len(x) < 3:
        raise ScoringError("need at least 3 points")
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("zero variance")
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    return sxy / math.sqrt(sxx * syy)


def split_half_reliability(reports: Iterable[ScoreReport]) -> float:
    """Correlation between first- and second-batch accuracies across sessions."""
    firsts, seconds = [], []
    for rep in reports:
        if len(rep.batch_accuracies) < 2:
            raise ScoringError(f"{rep.session_id}: fewer than 2 batches")
        firsts.append(rep.batch_accuracies[0])
        seconds.append(rep.batch_accuracies[1])
    return pearson(firsts, seconds)


@dataclass
class DistanceMatrix:
    entries: dict[tuple[str, str], float]

    def __post_init__(self):
        for (tested, native), dist in self.entries.items():
            if dist < 0:
                raise ValueError(f"negative distance for {tested},{native}")
            if tested == native and dist != 0.0:
                raise ValueError(f"distance({tested},{tested}) must be 0")

    @classmethod
    def from_csv(cls, source: TextIO) -> "DistanceMatrix":
        entries = {}
        reader = csv.DictReader(source)
        for row in reader:
            entries[(row["tested"], row["native"])] = float(row["distance"])
        return cls(entries)


def distance_correlation(mean_accuracies: dict[tuple[str, str], float],
                         distances: DistanceMatrix,
                         exclude_native: bool = False) -> float:
    """Correlation of per-(tested, native) accuracy with linguistic distance."""
    cells = sorted(
        cell for cell in mean_accuracies
        if cell in distances.entries and not (exclude_native and cell[0] == cell[1])
    )
    if len(cells) < 3:
        raise ScoringError("need at least 3 overlapping cells")
    accs = [mean_accuracies[c] for c in cells]
    dists = [distances.entries[c] for c in cells]
    return pearson(accs, dists)


def reports_to_csv(reports: Iterable[ScoreReport], sink: TextIO,
                   extra: dict[str, dict] | None = None):
    """Write reports as CSV; ``extra`` maps session_id to added columns."""
    extra = extra or {}
    extra_cols = sorted({k for cols in extra.values() for k in cols})
    writer = csv.writer(sink)
    writer.writerow(["session_id", "accuracy", "batch1", "batch2", "hit_rate",
                     "correct_rejection_rate", "n_trials", "n_missed", *extra_cols])
    for rep in reports:
        batches = rep.batch_accuracies + [None, None]
        row = [rep.session_id, f"{rep.accuracy:.6f}",
               _fmt(batches[0]), _fmt(batches[1]),
               f"{rep.hit_rate:.6f}", f"{rep.correct_rejection_rate:.6f}",
               rep.n_trials, rep.n_missed]
        row.extend(extra.get(rep.session_id, {}).get(c, "") for c in extra_cols)
        writer.writerow(row)


def _fmt(value):
    return "" if value is None else f"{value:.6f}"


def reports_from_csv(source: TextIO) -> tuple[list[ScoreReport], dict[str, dict]]:
    """Inverse of reports_to_csv; returns (reports, extra columns)."""
    fixed = {"session_id", "accuracy", "batch1", "batch2", "hit_rate",
             "correct_rejection_rate", "n_trials", "n_missed"}
    reports = []
    extra: dict[str, dict] = {}
    for row in csv.DictReader(source):
        batches = [float(row[k]) for k in ("batch1", "batch2") if row[k]]
        reports.append(ScoreReport(
            session_id=row["session_id"],
            accuracy=float(row["accuracy"]),
            batch_accuracies=batches,
            hit_rate=float(row["hit_rate"]),
            correct_rejection_rate=float(row["correct_rejection_rate"]),
            n_trials=int(row["n_trials"]),
            n_missed=int(row["n_missed"]),
        ))
        extras = {k: v for k, v in row.items() if k not in fixed and v}
        if extras:
            extra[row["session_id"]] = extras
    return reports, extra
