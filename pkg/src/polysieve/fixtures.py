"""Bundled reference instances."""

from __future__ import annotations

import functools
from importlib import resources
from pathlib import Path

from .structured import StructuredF, load_structured, parse_structured

NAMES = ("F_A", "F_B", "F_C", "F_D", "F_sing")


@functools.cache
def fixture(name: str) -> StructuredF:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(NAMES)}")
    text = resources.files("polysieve").joinpath("data", f"{name}.txt").read_text()
    return parse_structured(text, name=name)


def resolve_instance(spec: str) -> StructuredF:
    """A fixture name or a path to an instance file."""
    if spec in NAMES:
        return fixture(spec)
    path = Path(spec)
    if not path.is_file():
        raise FileNotFoundError(f"instance file not found: {spec}")
    return load_structured(path)
