"""Command-line frontend.

Each subcommand is one pipeline stage reading and writing plain files, so
a full test build is a short shell script:

    forge lexicon --lang en --corpus corpus.tsv --wordlist words.txt \
        --out lexicon.json
    forge decompound --lexicon lexicon.json --out lexicon.nc.json
    forge generate --lexicon lexicon.nc.json --count 1000 --seed 42 \
        --out candidates.json
    forge pair --lexicon lexicon.nc.json --candidates candidates.json \
        --reference reference.txt --seed 42 --out pairs.json
    forge assemble --pairs pairs.json --items 60 --out test.en.json
    forge serve --tests-dir tests/ --log sessions.jsonl
    forge score --sessions sessions.jsonl --test test.en.json --out reports.csv
    forge stats --reports reports.csv --distances dist.csv
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from collections import Counter
from pathlib import Path

from . import __version__, service
from .assemble import TestSet, build_test, fit_target, pair, select_pairs, \
    select_real_words
from .candidates import PseudowordValidator, dump_candidates, load_candidates
from .compound import NO_COMPOUND_SPLIT_LANGS, remove_compounds, train_splitter
from .corpus import (FilterConfig, Lexicon, SkipCounter, build_lexicon,
                     filter_jargon, ingest_tokens, load_wordlist)
from .ngram import TranslitTable, build_model, generate_candidates
from .scoring import (DistanceMatrix, ScoringError, distance_correlation,
                      reports_from_csv, reports_to_csv, score_session,
                      split_half_reliability)

log = logging.getLogger("forge")


def _load_lexicon(path: str) -> Lexicon:
    return Lexicon.from_json(Path(path).read_text(encoding="utf-8"))


def _load_table(path: str | None) -> TranslitTable | None:
    if path is None:
        return None
    with open(path, encoding="utf-8") as fh:
        return TranslitTable.from_tsv(fh)


def _write(path: str, text: str):
    Path(path).write_text(text, encoding="utf-8")


def cmd_lexicon(args) -> int:
    membership = {}
    if args.wordlist:
        with open(args.wordlist, encoding="utf-8") as fh:
            membership[args.lang] = load_wordlist(fh)
    cfg = FilterConfig(language=args.lang, membership_lexicons=membership,
                       jargon_percentile=args.jargon_percentile)
    skipped = SkipCounter()

    def tokens():
        for path in args.corpus:
            with open(path, encoding="utf-8") as fh:
                yield from ingest_tokens(fh, fmt=args.fmt, skipped=skipped)

    lex = build_lexicon(tokens(), cfg)
    before = len(lex)
    lex = filter_jargon(lex, cfg.jargon_percentile)
    _write(args.out, lex.to_json())
    print(f"{len(lex)} lemmas kept ({before - len(lex)} cut as jargon, "
          f"{skipped.count} corpus rows skipped), lengths "
          f"{lex.min_len}..{lex.max_len}", file=sys.stderr)
    return 0


def cmd_decompound(args) -> int:
    lex = _load_lexicon(args.lexicon)
    if args.disable or lex.language in NO_COMPOUND_SPLIT_LANGS:
        _write(args.out, lex.to_json())
        print("compound removal disabled, lexicon copied unchanged",
              file=sys.stderr)
        return 0
    splitter = train_splitter(lex)
    reduced, removed = remove_compounds(splitter, lex)
    _write(args.out, reduced.to_json())
    if args.model_out:
        _write(args.model_out, splitter.to_json())
    print(f"removed {len(removed)} compounds, {len(reduced)} lemmas remain",
          file=sys.stderr)
    for word in removed[:20]:
        print(f"  - {word}", file=sys.stderr)
    if len(removed) > 20:
        print(f"  ... and {len(removed) - 20} more", file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    lex = _load_lexicon(args.lexicon)
    table = _load_table(args.translit)
    model = build_model(lex, n=args.n, table=table)
    splitter = None
    if not args.no_compound_check and lex.language not in NO_COMPOUND_SPLIT_LANGS:
        splitter = train_splitter(lex)
    validator = PseudowordValidator(lex, splitter=splitter, table=table,
                                    model=model)
    rng = random.Random(args.seed)
    cands = generate_candidates(model, lex, validator, args.count, rng,
                                table=table)
    with open(args.out, "w", encoding="utf-8") as fh:
        dump_candidates(cands, fh)
    if args.model_out:
        _write(args.model_out, model.to_json())
    print(f"{len(cands)} pseudowords written to {args.out}", file=sys.stderr)
    return 0


def _read_candidate_texts(path: str) -> list[str]:
    """Accept either the candidates JSON export or a bare JSON string list."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        return [row["text"] for row in data["candidates"]]
    return list(data)


def cmd_validate(args) -> int:
    lex = _load_lexicon(args.lexicon)
    table = _load_table(args.translit)
    model = build_model(lex, n=args.n, table=table)
    splitter = None
    if not args.no_compound_check and lex.language not in NO_COMPOUND_SPLIT_LANGS:
        splitter = train_splitter(lex)
    validator = PseudowordValidator(lex, splitter=splitter, table=table,
                                    model=model)
    accepted = []
    histogram: Counter = Counter()
    for text in _read_candidate_texts(args.candidates):
        result = validator.validate(text)
        if result.rejected:
            histogram[result.reason.value] += 1
        else:
            histogram["accepted"] += 1
            accepted.append(result.candidate)
    with open(args.out, "w", encoding="utf-8") as fh:
        dump_candidates(accepted, fh)
    for reason, count in sorted(histogram.items()):
        print(f"{reason:>20}: {count}", file=sys.stderr)
    return 0


def _pairs_to_json(language: str, pairs) -> str:
    rows = [
        {
            "real_word": p.real_word,
            "distance": p.distance,
            "pseudo": {
                "text": p.pseudo.text,
                "letters": p.pseudo.letters,
                "profile": list(p.pseudo.profile.values) if p.pseudo.profile else None,
                "max_fuzzy_ratio": p.pseudo.max_fuzzy_ratio,
            },
        }
        for p in pairs
    ]
    return json.dumps({"language": language, "pairs": rows},
                      ensure_ascii=False, sort_keys=True, indent=1)


def _pairs_from_json(path: str):
    from .assemble import MatchedPair
    from .candidates import PseudowordCandidate
    from .ngram import LogProbProfile

    data = json.loads(Path(path).read_text(encoding="utf-8"))
    pairs = []
    for row in data["pairs"]:
        p = row["pseudo"]
        profile = None
        if p.get("profile") is not None:
            profile = LogProbProfile(p["text"], tuple(p["profile"]))
        cand = PseudowordCandidate(p["text"], p["letters"], profile,
                                   p["max_fuzzy_ratio"])
        pairs.append(MatchedPair(row["real_word"], cand, row["distance"]))
    return data["language"], pairs


def cmd_pair(args) -> int:
    lex = _load_lexicon(args.lexicon)
    table = _load_table(args.translit)
    model = build_model(lex, n=args.n, table=table)
    with open(args.candidates, encoding="utf-8") as fh:
        cands = load_candidates(fh)
    with open(args.reference, encoding="utf-8") as fh:
        reference = [line.strip() for line in fh if line.strip()]
    target = fit_target({lex.language: reference}, {lex.language: lex})[lex.language]
    count = args.count or len(cands)
    rng = random.Random(args.seed)
    words = select_real_words(lex, target, count, rng)
    matched, spare_words, spare_pseudos = pair(words, cands, model, table)
    _write(args.out, _pairs_to_json(lex.language, matched))
    print(f"{len(matched)} pairs written ({len(spare_words)} words, "
          f"{len(spare_pseudos)} pseudowords unmatched)", file=sys.stderr)
    return 0


def cmd_assemble(args) -> int:
    language, pairs = _pairs_from_json(args.pairs)
    keep = args.keep
    if keep > len(pairs):
        print(f"only {len(pairs)} pairs available, keeping all "
              f"(asked for {keep})", file=sys.stderr)
        keep = len(pairs)
    selected = select_pairs(pairs, keep)
    test = build_test(selected, items=args.items, seed=args.seed,
                      language=args.lang or language,
                      pipeline_version=__version__,
                      batch_size=args.batch_size)
    _write(args.out, test.to_json())
    print(f"{args.items}-item test written to {args.out}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    tests = service.load_tests(Path(args.tests_dir))
    if not tests:
        print(f"no test files found in {args.tests_dir}", file=sys.stderr)
        return 1
    svc = service.Service(tests, Path(args.log),
                          display_ms=args.display_ms, grace_ms=args.grace_ms)
    server = service.make_server(svc, args.host, args.port)
    host, port = server.server_address[:2]
    print(f"serving {len(tests)} tests on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
        svc.log.close()
    return 0


def cmd_score(args) -> int:
    test = TestSet.from_json(Path(args.test).read_text(encoding="utf-8"))
    responses: dict[str, dict] = {}
    native: dict[str, str] = {}
    for rec in service.read_events(Path(args.sessions)):
        if rec["event"] == "session_created":
            responses.setdefault(rec["session_id"], {})
            if rec.get("native_lang"):
                native[rec["session_id"]] = rec["native_lang"]
        elif rec["event"] == "response":
            per = responses.setdefault(rec["session_id"], {})
            per.setdefault(rec["item_id"], service.TrialResponse(
                rec["item_id"], rec["answer"], rec["rt_ms"],
                rec["served_at"], rec["received_at"], rec.get("client_rt_ms")))
    reports = []
    extra: dict[str, dict] = {}
    for session_id in sorted(responses):
        if not responses[session_id]:
            continue
        try:
            rep = score_session(session_id, responses[session_id].values(), test)
        except ScoringError as err:
            print(f"skipping {session_id}: {err}", file=sys.stderr)
            continue
        reports.append(rep)
        cols = {"tested_lang": test.language}
        if session_id in native:
            cols["native_lang"] = native[session_id]
        extra[session_id] = cols
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        reports_to_csv(reports, fh, extra)
    print(f"{len(reports)} sessions scored", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    with open(args.reports, encoding="utf-8", newline="") as fh:
        reports, extra = reports_from_csv(fh)
    if not reports:
        print("no reports", file=sys.stderr)
        return 1
    mean_acc = sum(r.accuracy for r in reports) / len(reports)
    print(f"sessions: {len(reports)}")
    print(f"mean accuracy: {mean_acc:.4f}")
    try:
        print(f"split-half reliability: {split_half_reliability(reports):.4f}")
    except ScoringError as err:
        print(f"split-half reliability: undefined ({err})")
    if args.distances:
        cells: dict[tuple[str, str], list[float]] = {}
        for rep in reports:
            cols = extra.get(rep.session_id, {})
            if "tested_lang" in cols and "native_lang" in cols:
                cell = (cols["tested_lang"], cols["native_lang"])
                cells.setdefault(cell, []).append(rep.accuracy)
        means = {cell: sum(v) / len(v) for cell, v in cells.items()}
        with open(args.distances, encoding="utf-8", newline="") as fh:
            matrix = DistanceMatrix.from_csv(fh)
        try:
            r = distance_correlation(means, matrix,
                                     exclude_native=args.exclude_native)
            print(f"distance correlation: {r:.4f} over {len(means)} cells")
        except ScoringError as err:
            print(f"distance correlation: undefined ({err})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forge",
        description="Build, serve, and score lexical-decision vocabulary tests.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lexicon", help="build a filtered noun lexicon")
    p.add_argument("--lang", required=True)
    p.add_argument("--corpus", nargs="+", required=True)
    p.add_argument("--fmt", choices=("tsv", "conllu"), default="tsv")
    p.add_argument("--wordlist", help="membership word list, one word per line")
    p.add_argument("--jargon-percentile", type=float, default=95.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lexicon)

    p = sub.add_parser("decompound", help="drop compound lemmas from a lexicon")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--disable", action="store_true",
                   help="copy the lexicon through unchanged")
    p.add_argument("--model-out", help="also export the splitter statistics")
    p.set_defaults(func=cmd_decompound)

    p = sub.add_parser("generate", help="sample validated pseudowords")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--translit", help="character-to-letters TSV table")
    p.add_argument("--no-compound-check", action="store_true")
    p.add_argument("--model-out", help="also export the transition model")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="re-validate a pseudoword list")
    p.add_argument("--candidates", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--translit")
    p.add_argument("--no-compound-check", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pair", help="match difficulty-targeted words to pseudowords")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--reference", required=True,
                   help="reference items, one word per line")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--count", type=int,
                   help="real words to draw (default: number of candidates)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--translit")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("assemble", help="assemble the exported test")
    p.add_argument("--pairs", required=True)
    p.add_argument("--keep", type=int, default=500,
                   help="pairs to keep by smallest fuzzy ratio")
    p.add_argument("--items", type=int, default=60)
    p.add_argument("--batch-size", type=int, default=30)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--lang", help="override the language recorded in the test")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("serve", help="administer tests over HTTP")
    p.add_argument("--tests-dir", required=True,
                   help="directory of test JSON files, keyed by file name")
    p.add_argument("--log", required=True, help="append-only session log (JSONL)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8712)
    p.add_argument("--display-ms", type=int, default=service.DISPLAY_MS)
    p.add_argument("--grace-ms", type=int, default=service.GRACE_MS)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("score", help="score logged sessions against a test")
    p.add_argument("--sessions", required=True, help="session log (JSONL)")
    p.add_argument("--test", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("stats", help="cohort statistics over score reports")
    p.add_argument("--reports", required=True)
    p.add_argument("--distances", help="language distance matrix CSV")
    p.add_argument("--exclude-native", action="store_true",
                   help="drop native-language cells from the correlation")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
