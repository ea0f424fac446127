"""Bundled sample data: a small annotated English corpus with its word
list and reference items, plus a toy pinyin transliteration table."""

from importlib.resources import files
from pathlib import Path


def path(*parts: str) -> Path:
    """Filesystem path of a bundled data file, e.g. path("mini_en", "corpus.tsv")."""
    resource = files(__package__).joinpath("/".join(parts))
    return Path(str(resource))


def mini_en() -> dict[str, Path]:
    """Paths of the bundled English mini corpus."""
    return {
        "corpus": path("mini_en", "corpus.tsv"),
        "wordlist": path("mini_en", "wordlist.txt"),
        "reference": path("mini_en", "reference.txt"),
    }
