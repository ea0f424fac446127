"""Score simulated sessions and read the cohort statistics.

Fakes a cohort of participants whose competence falls off with the
distance between their native language and the tested one, scores every
session, then checks that the statistics recover what was planted:
split-half reliability and the accuracy/distance correlation.
"""

import random

from vocabforge.assemble import TestItem, TestSet
from vocabforge.scoring import (DistanceMatrix, distance_correlation,
                                score_session, split_half_reliability)
from vocabforge.service import TrialResponse

# a key is plain data: 40 items, half real, alternating
key = TestSet(language="en", seed=0, pipeline_version="demo", batch_size=20,
              items=[TestItem(f"i{k:03d}", f"w{k:03d}", k % 2 == 0)
                     for k in range(40)])

NATIVES = ["da", "de", "nl", "pl", "tr"]
distances = DistanceMatrix({("en", nat): 0.5 * i
                            for i, nat in enumerate(NATIVES)})

rng = random.Random(99)
reports, native_of = [], {}
for s in range(40):
    native = NATIVES[s % len(NATIVES)]
    ability = rng.gauss(0.0, 0.06)   # stable per-person competence
    p_correct = min(0.98, max(0.55,
                    0.92 - 0.08 * distances.entries[("en", native)] + ability))
    responses = []
    for pos, item in enumerate(key.items):
        truth = "real" if item.is_real else "fake"
        wrong = "fake" if item.is_real else "real"
        answer = truth if rng.random() < p_correct else wrong
        responses.append(TrialResponse(item.id, answer, rt_ms=400,
                                       served_at=pos * 4.0,
                                       received_at=pos * 4.0 + 0.4))
    report = score_session(f"s{s:02d}", responses, key)
    reports.append(report)
    native_of[report.session_id] = native

print(f"scored {len(reports)} sessions")
print(f"accuracy range {min(r.accuracy for r in reports):.2f}.."
      f"{max(r.accuracy for r in reports):.2f}")

rel = split_half_reliability(reports)
print(f"split-half reliability (Spearman-Brown): {rel:.3f}")

cells: dict[tuple[str, str], list[float]] = {}
for r in reports:
    cells.setdefault(("en", native_of[r.session_id]), []).append(r.accuracy)
means = {cell: sum(v) / len(v) for cell, v in cells.items()}
r_dist = distance_correlation(means, distances)
print(f"accuracy vs language distance over {len(means)} cells: r = {r_dist:.3f}")
print("planted effect was negative (farther native language, lower accuracy)")
