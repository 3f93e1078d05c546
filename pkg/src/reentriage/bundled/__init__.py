"""Bundled hand-labeled sample corpus: eight small contracts covering one
true positive and one representative per false-positive cause."""

from importlib import resources
from pathlib import Path


def corpus_dir() -> Path:
    """Filesystem path of the bundled corpus directory."""
    return Path(resources.files(__package__) / "corpus")
