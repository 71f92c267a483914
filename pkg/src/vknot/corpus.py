"""Bundled transcriptions of the worked-example diagrams."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .diagram import parse_knot, parse_string, read_lines
from .matrix import parse_matrix

NAMES = (
    "unknot",
    "trefoil",
    "virtualized_trefoil",
    "kishino",
    "kishino_string",
    "k1",
    "k2",
    "k1_glued_3",
    "k1_glued_4",
    "b3",
    "b4",
)


class CorpusError(FileNotFoundError):
    pass


def read(name, corpus_dir=None):
    if corpus_dir is not None:
        path = Path(corpus_dir) / f"{name}.txt"
        if not path.is_file():
            raise CorpusError(f"corpus file missing: {path}")
        return path.read_text()
    try:
        return resources.files("vknot.data").joinpath(f"{name}.txt").read_text()
    except FileNotFoundError:
        raise CorpusError(f"corpus entry missing: {name}") from None


def _first(name, corpus_dir):
    for lineno, body in read_lines(read(name, corpus_dir)):
        return lineno, body
    raise CorpusError(f"corpus entry {name} is empty")


def knot(name, corpus_dir=None):
    lineno, body = _first(name, corpus_dir)
    return parse_knot(body, lineno)


def string(name, corpus_dir=None):
    lineno, body = _first(name, corpus_dir)
    return parse_string(body, lineno)


def matrix(name, corpus_dir=None, singular=True):
    return parse_matrix(read(name, corpus_dir), singular=singular)
