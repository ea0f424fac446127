import pytest

from vocabforge import pipeline
from vocabforge.data import mini_en


@pytest.fixture(scope="session")
def mini_paths():
    return mini_en()


@pytest.fixture(scope="session")
def golden(mini_paths):
    """One full pipeline run on the bundled corpus, shared by many tests."""
    return pipeline.run(
        [mini_paths["corpus"]],
        mini_paths["reference"],
        language="en",
        wordlist_path=mini_paths["wordlist"],
        seed=42,
    )
