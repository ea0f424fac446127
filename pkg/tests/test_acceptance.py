"""Acceptance gates for the whole package, one test per guarantee.

Each test pins the tolerances the package promises: exact where the
behavior is discrete (counts, oracles, byte identity), statistical
tolerances where a property is sampled (50/50 split within 2%, synthetic
cohort reliability within 0.05).
"""

import itertools
import math
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor

import pytest

from helpers import (FakeClock, LeakDetector, brute_force_max_fuzzy,
                     dumps_sorted, lcs_recursive, make_key, make_lexicon,
                     oracle_greedy_pairs, run_http_session)
from vocabforge import pipeline
from vocabforge.assemble import pair, profile_distance
from vocabforge.candidates import (PseudowordCandidate, PseudowordValidator,
                                   RejectReason, fuzzy_ratio, lcs_length,
                                   max_fuzzy)
from vocabforge.compound import is_compound, train_splitter
from vocabforge.corpus import FilterConfig, Token, accept_token, filter_jargon
from vocabforge.ngram import (LogProbProfile, build_model, logprob_profile,
                              sample_pseudoword)
from vocabforge.scoring import (DistanceMatrix, ScoreReport,
                                distance_correlation, pearson,
                                split_half_reliability)
from vocabforge.service import Service, make_server, replay


def test_end_to_end_golden_run(mini_paths):
    """Bundled corpus, fixed seed: a full 60-item test, byte-stable, < 60 s."""
    started = time.monotonic()
    runs = [
        pipeline.run([mini_paths["corpus"]], mini_paths["reference"],
                     language="en", wordlist_path=mini_paths["wordlist"], seed=42)
        for _ in range(2)
    ]
    elapsed = time.monotonic() - started
    first, second = runs
    assert len(first.lexicon) >= 2_000
    assert len(first.test.items) == 60
    assert sum(it.is_real for it in first.test.items) == 30
    assert sum(not it.is_real for it in first.test.items) == 30
    for cand in first.pseudowords:
        assert cand.text not in first.lexicon.entries
        assert first.lexicon.min_len <= len(cand.text) <= first.lexicon.max_len
    assert first.test.to_json().encode() == second.test.to_json().encode()
    assert elapsed < 60.0


def test_ngram_model_properties(golden):
    """Distributions normalize; samples stay representable; toy model is fair."""
    model = golden.model
    for context, dist in model.transitions.items():
        total = sum(model.probability(context, letter) for letter in dist)
        assert abs(total - 1.0) <= 1e-9
    for cand in golden.pseudowords:
        assert cand.profile is not None
        assert all(math.isfinite(v) and v <= 0.0 for v in cand.profile.values)
    toy = build_model(make_lexicon({"ab": 1, "cd": 1}), n=3)
    rng = random.Random(20_26)
    draws = [sample_pseudoword(toy, rng) for _ in range(10_000)]
    assert set(draws) == {"ab", "cd"}
    assert abs(draws.count("ab") / 10_000 - 0.5) <= 0.02


def test_fuzzy_ratio_and_restricted_search_match_oracles():
    """LCS DP vs memoized recursion, index search vs brute force: exact."""
    rng = random.Random(4242)
    for _ in range(10_000):
        a = "".join(rng.choice("abcde") for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice("abcde") for _ in range(rng.randint(0, 12)))
        assert lcs_length(a, b) == lcs_recursive(a, b)
        if a and b:
            assert fuzzy_ratio(a, b) == round(
                200.0 * lcs_recursive(a, b) / (len(a) + len(b)), 1)
    for _ in range(5):
        lemmas = {"".join(rng.choice("abcdef") for _ in range(rng.randint(2, 12)))
                  for _ in range(1_000)}
        lex = make_lexicon({w: 1 for w in lemmas})
        for _ in range(50):
            pseudo = "".join(rng.choice("abcdef")
                             for _ in range(rng.randint(2, 12)))
            assert max_fuzzy(pseudo, lex) == brute_force_max_fuzzy(pseudo, lemmas)


def test_greedy_pairing_matches_repeated_argmin():
    """Exhaustive size sweep against the literal argmin oracle; distances 1e-12."""
    lex = make_lexicon({
        "".join(bits): 1
        for length in (2, 3, 4)
        for bits in itertools.product("ab", repeat=length)
    })
    model = build_model(lex, n=2)
    lemmas = sorted(lex.entries)
    rng = random.Random(606)
    for n_words in range(7):
        for n_pseudos in range(7):
            for _ in range(3):
                words = rng.sample(lemmas, n_words)
                pseudos = []
                for i in range(n_pseudos):
                    if rng.random() < 0.1:
                        pseudos.append(PseudowordCandidate(f"p{i}", f"p{i}",
                                                           None, 0.0))
                        continue
                    length = rng.choice([3, 4, 5])
                    values = tuple(-rng.uniform(0.0, 3.0) for _ in range(length))
                    pseudos.append(PseudowordCandidate(
                        f"p{i}", f"p{i}", LogProbProfile(f"p{i}", values), 0.0))
                got, _, _ = pair(words, pseudos, model)
                expected = oracle_greedy_pairs(words, pseudos, model)
                assert [(p.real_word, p.pseudo.text) for p in got] == \
                    [(w, t) for w, t, _ in expected]
                for p, (_, _, d) in zip(got, expected):
                    assert abs(p.distance - d) <= 1e-12


def test_selected_pairs_recompute_exactly(golden):
    """Every exported pair: equal profile lengths, stored = recomputed distance."""
    for p in golden.pairs:
        wp = logprob_profile(golden.model, p.real_word)
        assert len(wp.values) == len(p.pseudo.profile.values)
        assert abs(p.distance - profile_distance(wp, p.pseudo.profile)) <= 1e-12


def test_jargon_percentile_cut_is_exact():
    """Concentration ratios 1..100 cut at the 95th percentile leave 1..95."""
    lex = make_lexicon({f"word{i:03d}": (i, 1) for i in range(1, 101)})
    kept = filter_jargon(lex, 95.0)
    assert sorted(e.token_count for e in kept.entries.values()) == \
        list(range(1, 96))


def test_compound_gate(golden):
    """snowball is flagged and eliminated before generation."""
    lex = make_lexicon({"snow": 10, "ball": 10, "snowball": 2})
    assert is_compound(train_splitter(lex), lex, "snowball")
    assert "snowball" in golden.removed_compounds
    assert "snowball" not in golden.lexicon.entries


def test_scoring_statistics_recover_known_values():
    """Hand-checked pearson; synthetic cohort reliability; planted slope."""
    assert abs(pearson((1, 2, 3), (1, 2, 4)) - 0.9819) <= 1e-4

    rng = random.Random(11_88)
    var_t, var_e = 0.04, 0.01
    reports = []
    for i in range(1_000):
        t = rng.gauss(0.7, var_t ** 0.5)
        halves = [t + rng.gauss(0, var_e ** 0.5) for _ in range(2)]
        reports.append(ScoreReport(f"s{i}", sum(halves) / 2, halves,
                                   0.0, 0.0, 60, 0))
    expected = var_t / (var_t + var_e)
    assert abs(split_half_reliability(reports) - expected) <= 0.05

    langs = [f"l{i}" for i in range(8)]
    accs, dists = {}, {}
    for i, tested in enumerate(langs):
        for j, native in enumerate(langs[:6]):
            d = 0.9 * abs(i - j)
            dists[(tested, native)] = d
            accs[(tested, native)] = 0.93 - 0.045 * d + rng.uniform(-0.004, 0.004)
    r = distance_correlation(accs, DistanceMatrix(dists))
    assert abs(r - (-1.0)) <= 0.05


def test_service_concurrency_leakage_and_replay(tmp_path, golden):
    """50 concurrent sessions, clean wire, byte-identical replay, hard timeout."""
    tests = {"en": golden.test}
    service = Service(tests, tmp_path / "acc.jsonl")
    server = make_server(service, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    base = f"http://{host}:{port}"
    detector = LeakDetector()
    try:
        def drive(i):
            return run_http_session(base, "en", golden.test,
                                    wrong_positions=range(i % 20),
                                    detector=detector, seed=5_000 + i)

        with ThreadPoolExecutor(max_workers=16) as pool:
            results = list(pool.map(drive, range(50)))
    finally:
        server.shutdown()
        server.server_close()
        service.log.close()
    assert len(results) == 50
    for report, intended in results:
        assert report["accuracy"] == pytest.approx(intended)
        assert report["n_trials"] == 60
    assert not detector.leaked
    replayed = replay(tmp_path / "acc.jsonl", tests)
    assert len(replayed) == 50
    for pairing in replayed.values():
        assert dumps_sorted(pairing["stored"]) == dumps_sorted(pairing["recomputed"])

    clock = FakeClock()
    timed = Service({"t": make_key([True, False])}, tmp_path / "late.jsonl",
                    clock=clock)
    session = timed.create_session("t", seed=0)
    trial = timed.next_trial(session.session_id)
    clock.advance(4_000)
    ack = timed.submit_response(session.session_id, trial["item_id"], "real")
    timed.log.close()
    assert ack["answer"] == "timeout"
    assert session.responses[trial["item_id"]].answer == "timeout"


def test_example_items_round_trip(golden):
    """carrion is a real word on both sides of the pipeline; washioneer is not."""
    assert accept_token(Token("carrion", "carrion", "NOUN", "d"), FilterConfig())
    assert "carrion" in golden.lexicon.entries
    validator = PseudowordValidator(golden.lexicon, splitter=golden.splitter,
                                    model=golden.model)
    assert validator.validate("carrion").reason is RejectReason.REAL_WORD
    result = validator.validate("washioneer")
    assert not result.rejected
    assert "washioneer" not in golden.lexicon.entries
