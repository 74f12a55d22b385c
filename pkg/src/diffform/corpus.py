"""Shipped corpus complexes, loaded from package data."""

from __future__ import annotations

import importlib.resources

from .space import SimplicialComplex, parse_complex

CORPUS_NAMES = (
    "delta3",
    "sphere2",
    "circle",
    "rp2",
    "torus",
    "klein",
    "disc2_mod_boundary",
    "disc3_mod_boundary",
)

_cache: dict = {}


def corpus_text(name: str) -> str:
    ref = importlib.resources.files("diffform").joinpath(f"data/{name}.cplx")
    return ref.read_text()


def load_corpus(name: str) -> SimplicialComplex:
    if name not in _cache:
        if name not in CORPUS_NAMES:
            raise KeyError(f"unknown corpus complex {name!r}")
        _cache[name] = parse_complex(corpus_text(name))
    return _cache[name]


def all_corpus() -> dict:
    return {name: load_corpus(name) for name in CORPUS_NAMES}
