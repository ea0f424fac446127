"""Corpus ingestion, token acceptance, and the concentration-ratio jargon cut."""

import io
import random

import pytest

from helpers import make_lexicon
from vocabforge.corpus import (EmptyLexiconError, FilterConfig, Lexicon,
                               ParseError, SkipCounter, Token, accept_token,
                               build_lexicon, filter_jargon, ingest_tokens,
                               letter_length, load_wordlist,
                               nearest_rank_percentile)

CFG = FilterConfig()


def toks(text, fmt="tsv", skipped=None):
    return list(ingest_tokens(io.StringIO(text), fmt=fmt, skipped=skipped))


class TestIngestTsv:
    def test_field_mapping(self):
        (tok,) = toks("d1\tDogs\tdog\tNOUN\n")
        assert tok == Token(surface="Dogs", lemma="dog", upos="NOUN", doc_id="d1")

    def test_empty_lemma_reports_line_number(self):
        with pytest.raises(ParseError, match="line 2"):
            toks("d1\tDogs\tdog\tNOUN\nd1\tran\t\tVERB\n")

    def test_wrong_column_count(self):
        with pytest.raises(ParseError, match="4 tab-separated columns"):
            toks("d1\tDogs\tdog\n")

    def test_comments_and_blank_lines_skipped(self):
        text = "# header\n\nd1\tcat\tcat\tNOUN\n"
        assert len(toks(text)) == 1

    def test_unknown_pos_skipped_and_counted(self):
        skipped = SkipCounter()
        text = "d1\tcat\tcat\tNOUN\nd1\tfoo\tfoo\tXPOS\nd1\tbar\tbar\tFOO\n"
        assert [t.lemma for t in toks(text, skipped=skipped)] == ["cat"]
        assert skipped.count == 2

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError, match="unknown corpus format"):
            ingest_tokens(io.StringIO(""), fmt="xml")


class TestIngestConllu:
    TEXT = (
        "# newdoc id = d1\n"
        "# sent_id = 1\n"
        "1\tDogs\tdog\tNOUN\t_\t_\t0\t_\t_\t_\n"
        "2\tbark\tbark\tVERB\t_\t_\t1\t_\t_\t_\n"
        "\n"
        "# newdoc\n"
        "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tde\tde\tADP\t_\t_\t0\t_\t_\t_\n"
        "1.1\tnull\tnull\tX\t_\t_\t_\t_\t_\t_\n"
        "2\tcats\tcat\tNOUN\t_\t_\t1\t_\t_\t_\n"
    )

    def test_documents_and_fields(self):
        tokens = toks(self.TEXT, fmt="conllu")
        assert [(t.lemma, t.doc_id) for t in tokens] == [
            ("dog", "d1"), ("bark", "d1"), ("de", "doc2"), ("cat", "doc2")]

    def test_ranges_and_empty_nodes_carry_no_counts(self):
        lemmas = [t.surface for t in toks(self.TEXT, fmt="conllu")]
        assert "del" not in lemmas and "null" not in lemmas

    def test_short_row_raises(self):
        with pytest.raises(ParseError, match="line 1"):
            toks("1\tword\tword\n", fmt="conllu")

    def test_unknown_pos_counted(self):
        skipped = SkipCounter()
        toks("1\tw\tw\tWEIRD\t_\t_\t_\t_\t_\t_\n", fmt="conllu", skipped=skipped)
        assert skipped.count == 1


class TestAcceptToken:
    def test_common_noun_accepted(self):
        assert accept_token(Token("carrion", "carrion", "NOUN", "d"), CFG)

    def test_proper_noun_rejected(self):
        assert not accept_token(Token("Eli", "Eli", "PROPN", "d"), CFG)

    def test_all_caps_surface_rejected(self):
        assert not accept_token(Token("NASA", "NASA", "NOUN", "d"), CFG)

    def test_non_letter_lemma_rejected(self):
        assert not accept_token(Token("co2", "co2", "NOUN", "d"), CFG)
        assert not accept_token(Token("ice-cream", "ice-cream", "NOUN", "d"), CFG)

    def test_single_letter_rejected(self):
        assert not accept_token(Token("x", "x", "NOUN", "d"), CFG)

    def test_verb_rejected(self):
        assert not accept_token(Token("barks", "bark", "VERB", "d"), CFG)

    def test_wordlist_membership(self):
        cfg = FilterConfig(membership_lexicons={"en": {"dog"}})
        assert accept_token(Token("Dogs", "Dog", "NOUN", "d"), cfg)
        assert not accept_token(Token("cats", "cat", "NOUN", "d"), cfg)

    def test_wordlist_for_other_language_ignored(self):
        cfg = FilterConfig(language="de", membership_lexicons={"en": {"dog"}})
        assert accept_token(Token("Katze", "katze", "NOUN", "d"), cfg)

    def test_decomposed_accents_normalize_before_checks(self):
        # NFD form carries a combining mark that is not itself a letter
        assert accept_token(Token("cafés", "café", "NOUN", "d"), CFG)

    def test_letter_length_counts_letters_after_nfc(self):
        assert letter_length("café") == 4
        assert letter_length("ice-cream") == 8


class TestBuildLexicon:
    def test_case_variants_merge(self):
        tokens = [Token("Dog", "Dog", "NOUN", "d1"),
                  Token("dogs", "dog", "NOUN", "d2")]
        lex = build_lexicon(tokens, CFG)
        assert set(lex.entries) == {"dog"}
        assert lex.entries["dog"].token_count == 2
        assert lex.entries["dog"].doc_count == 2

    def test_token_and_document_counts(self):
        tokens = [Token("dog", "dog", "NOUN", f"d{i % 2}") for i in range(5)]
        lex = build_lexicon(tokens, CFG)
        entry = lex.entries["dog"]
        assert (entry.token_count, entry.doc_count) == (5, 2)
        assert entry.concentration_ratio == 2.5

    def test_length_bounds(self):
        tokens = [Token("ox", "ox", "NOUN", "d"),
                  Token("butterfly", "butterfly", "NOUN", "d")]
        lex = build_lexicon(tokens, CFG)
        assert (lex.min_len, lex.max_len) == (2, 9)

    def test_nothing_accepted_raises(self):
        with pytest.raises(EmptyLexiconError):
            build_lexicon([Token("ran", "run", "VERB", "d")], CFG)

    def test_token_order_does_not_matter(self):
        rng = random.Random(7)
        tokens = [Token(w, w, "NOUN", f"d{i % 3}")
                  for i, w in enumerate(["cat", "dog", "cat", "owl", "dog", "cat"])]
        baseline = build_lexicon(tokens, CFG)
        for _ in range(10):
            rng.shuffle(tokens)
            assert build_lexicon(tokens, CFG).entries == baseline.entries

    def test_json_round_trip(self):
        lex = make_lexicon({"dog": (5, 2), "café": (3, 1)})
        again = Lexicon.from_json(lex.to_json())
        assert again.entries == lex.entries
        assert (again.language, again.min_len, again.max_len) == ("en", 3, 4)


class TestNearestRankPercentile:
    def test_known_values(self):
        values = list(range(1, 11))
        assert nearest_rank_percentile(values, 50.0) == 5
        assert nearest_rank_percentile(values, 95.0) == 10
        assert nearest_rank_percentile(values, 100.0) == 10
        assert nearest_rank_percentile([5.0], 95.0) == 5.0

    def test_input_order_irrelevant(self):
        assert nearest_rank_percentile([3.0, 1.0, 2.0], 50.0) == 2.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            nearest_rank_percentile([], 95.0)

    def test_result_always_a_member(self):
        rng = random.Random(11)
        for _ in range(200):
            values = [rng.uniform(0, 100) for _ in range(rng.randint(1, 40))]
            p = rng.uniform(0.1, 100.0)
            assert nearest_rank_percentile(values, p) in values


class TestFilterJargon:
    def test_ratios_1_to_100_keep_exactly_95(self):
        lex = make_lexicon({f"word{i:03d}": (i, 1) for i in range(1, 101)})
        kept = filter_jargon(lex, 95.0)
        assert len(kept) == 95
        assert {e.token_count for e in kept.entries.values()} == set(range(1, 96))

    def test_equal_ratios_all_survive(self):
        lex = make_lexicon({w: (4, 2) for w in ["cat", "dog", "owl"]})
        assert len(filter_jargon(lex, 50.0)) == 3

    def test_threshold_ties_kept(self):
        lex = make_lexicon({"low": (1, 1), "mid1": (5, 1), "mid2": (5, 1),
                            "high": (50, 1)})
        kept = filter_jargon(lex, 75.0)
        assert set(kept.entries) == {"low", "mid1", "mid2"}

    def test_singleton_kept(self):
        lex = make_lexicon({"cat": (9, 3)})
        assert set(filter_jargon(lex, 95.0).entries) == {"cat"}

    def test_length_bounds_recomputed(self):
        lex = make_lexicon({"ox": (1, 1), "cat": (2, 1), "dragonfly": (90, 1)})
        kept = filter_jargon(lex, 50.0)
        assert set(kept.entries) == {"ox", "cat"}
        assert (kept.min_len, kept.max_len) == (2, 3)

    def test_monotone_in_percentile(self):
        rng = random.Random(3)
        lex = make_lexicon({f"w{i}xy": (rng.randint(1, 300), rng.randint(1, 9))
                            for i in range(60)})
        kept = [set(filter_jargon(lex, p).entries) for p in (20, 40, 60, 80, 100)]
        for smaller, larger in zip(kept, kept[1:]):
            assert smaller <= larger

    def test_output_subset_of_input(self):
        lex = make_lexicon({f"w{i}z": (i + 1, 1) for i in range(30)})
        assert set(filter_jargon(lex, 80.0).entries) <= set(lex.entries)

    def test_empty_lexicon_rejected(self):
        with pytest.raises(EmptyLexiconError):
            filter_jargon(Lexicon("en", {}, 0, 0), 95.0)

    def test_bad_percentile_rejected(self):
        lex = make_lexicon({"cat": (1, 1)})
        with pytest.raises(ValueError):
            filter_jargon(lex, 0.0)
        with pytest.raises(ValueError):
            filter_jargon(lex, 101.0)


def test_filter_config_validates_percentile():
    with pytest.raises(ValueError):
        FilterConfig(jargon_percentile=0.0)


def test_load_wordlist_normalizes():
    words = load_wordlist(io.StringIO(" Dog \n\ncafé\n"))
    assert words == {"dog", "café"}
