"""Sentence similarity from pre-trained word vectors via simple pooling.

The text vector format is one token per line, ``token v1 ... vd``, with an
optional ``count dim`` header. Out-of-vocabulary tokens are skipped rather
than zero-imputed; a sentence with no in-vocabulary token pools to None and
scores 0 against anything.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from collections.abc import Sequence

import numpy as np

POOLING_MODES = ("mean", "min", "max", "sum")


class VectorFormatError(ValueError):
    """Malformed word-vector file."""


@dataclass
class VectorModel:
    dim: int
    table: dict[str, np.ndarray]

    def __contains__(self, token: str) -> bool:
        return token in self.table


def load_vectors(path: str | Path, expected_dim: int | None = None) -> VectorModel:
    """Load a text-format word-vector file.

    Duplicate tokens keep their first occurrence with a warning; ragged
    rows and non-finite components are errors.
    """
    path = Path(path)
    table: dict[str, np.ndarray] = {}
    dim: int | None = expected_dim
    declared_count: int | None = None
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and not table:
                try:
                    declared_count, header_dim = int(parts[0]), int(parts[1])
                except ValueError:
                    pass
                else:
                    if dim is not None and header_dim != dim:
                        raise VectorFormatError(
                            f"{path}:1: header dim {header_dim} != expected {dim}")
                    dim = header_dim
                    continue
            token, values = parts[0], parts[1:]
            try:
                vec = np.array([float(v) for v in values], dtype=float)
            except ValueError as exc:
                raise VectorFormatError(f"{path}:{lineno}: {exc}") from None
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise VectorFormatError(
                    f"{path}:{lineno}: expected {dim} components, got {len(vec)}")
            if not np.all(np.isfinite(vec)):
                raise VectorFormatError(f"{path}:{lineno}: non-finite component")
            if token in table:
                warnings.warn(f"{path}:{lineno}: duplicate token {token!r}, keeping first")
                continue
            table[token] = vec
    if dim is None:
        raise VectorFormatError(f"{path}: no vectors found")
    if declared_count is not None and declared_count != len(table):
        warnings.warn(f"{path}: header declares {declared_count} vectors, found {len(table)}")
    return VectorModel(dim, table)


def write_vectors(model: VectorModel, path: str | Path, header: bool = True) -> None:
    """Write a model in the text format; round-trips through load_vectors."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(f"{len(model.table)} {model.dim}\n")
        for token, vec in model.table.items():
            rendered = " ".join(format(v, ".17g") for v in vec)
            fh.write(f"{token} {rendered}\n")


def pool(tokens: Sequence[str], model: VectorModel, mode: str) -> np.ndarray | None:
    """Component-wise pooling over in-vocabulary token vectors."""
    if mode not in POOLING_MODES:
        raise ValueError(f"mode must be one of {POOLING_MODES}, got {mode!r}")
    vectors = [model.table[t] for t in tokens if t in model.table]
    if not vectors:
        return None
    stack = np.stack(vectors)
    if mode == "mean":
        return stack.mean(axis=0)
    if mode == "min":
        return stack.min(axis=0)
    if mode == "max":
        return stack.max(axis=0)
    return stack.sum(axis=0)


def swem_sim(s1: Sequence[str], s2: Sequence[str], model: VectorModel, mode: str = "mean") -> float:
    """Cosine of the pooled sentence vectors, in [-1, 1].

    Returns 0 when either side pools to None or a zero vector. Benchmark
    reporting may rescale with (x + 1) / 2 for measures declared signed.
    """
    v1 = pool(s1, model, mode)
    v2 = pool(s2, model, mode)
    if v1 is None or v2 is None:
        return 0.0
    n1 = float(np.linalg.norm(v1))
    n2 = float(np.linalg.norm(v2))
    if n1 == 0.0 or n2 == 0.0:
        return 0.0
    return float(np.dot(v1, v2) / (n1 * n2))


def rescale_signed(x: float) -> float:
    """Map a signed cosine in [-1, 1] onto [0, 1]."""
    return (x + 1.0) / 2.0
