"""Access to the shipped data files.

The directory can be overridden with the ``BALLQUOT_DATA`` environment variable
or by passing ``data_dir`` explicitly.
"""

from __future__ import annotations

import os
import sys
from importlib import resources
from pathlib import Path

from .eisenstein import CycMatrix, parse_cyc_matrices
from .matgroups import ModMatrix, parse_matrices
from .words import Presentation, Word, parse_presentation, parse_word_file

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

ENV_VAR = "BALLQUOT_DATA"


class MissingDataError(FileNotFoundError):
    pass


def data_dir(override: str | os.PathLike | None = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("ballquot") / "data"))


def read_text(name: str, override=None) -> str:
    path = data_dir(override) / name
    if not path.is_file():
        raise MissingDataError(f"data file not found: {path}")
    return path.read_text(encoding="utf-8")


def load_presentation(name: str, override=None) -> Presentation:
    return parse_presentation(read_text(name, override), name=name.rsplit(".", 1)[0])


def load_words(name: str, override=None) -> tuple[tuple[str, ...], dict[str, Word]]:
    return parse_word_file(read_text(name, override))


def load_matrices(name: str, override=None) -> dict[str, ModMatrix]:
    return parse_matrices(read_text(name, override))


def load_cyc_matrices(name: str, override=None) -> dict[str, CycMatrix]:
    return parse_cyc_matrices(read_text(name, override))


def load_toml(name: str, override=None) -> dict:
    return tomllib.loads(read_text(name, override))


def tau_matrices(override=None) -> tuple[list[ModMatrix], dict[str, ModMatrix], ModMatrix]:
    """(tau(h1..h4), reference tau(g1..g4), reference tau(w1))."""
    h = load_matrices("tau_h.mat", override)
    g = load_matrices("tau_g.mat", override)
    w1 = load_matrices("tau_w1.mat", override)["w1"]
    return [h[f"h{i}"] for i in range(1, 5)], g, w1
