"""Corpus-driven generation, administration, and scoring of timed
lexical-decision vocabulary tests."""

__version__ = "0.3.0"
