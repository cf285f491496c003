"""Bundled toy dataset: a 48-pair artificial corpus with gold alignments."""

from importlib import resources


def toy_paths() -> tuple[str, str, str]:
    """Paths of the bundled (source, target, annotations) files."""
    base = resources.files(__package__)
    return (
        str(base / "toy.source.txt"),
        str(base / "toy.target.txt"),
        str(base / "toy.alignments.txt"),
    )
