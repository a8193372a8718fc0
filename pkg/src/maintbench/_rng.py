"""Deterministic substream derivation for every randomized procedure.

All stochastic code in the package draws from generators produced here.
Substreams are derived from a root seed plus a tuple of labels (strings or
ints), so parallel and serial execution of the same logical task consume
identical streams.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_entropy(seed: int, *labels: object) -> list[int]:
    """Mix ``seed`` and ``labels`` into SeedSequence entropy words."""
    h = hashlib.sha256()
    for label in labels:
        h.update(repr(label).encode("utf-8"))
        h.update(b"\x1f")
    words = [int.from_bytes(h.digest()[i : i + 4], "little") for i in range(0, 16, 4)]
    return [int(seed) & 0xFFFFFFFFFFFFFFFF, *words]


def substream(seed: int, *labels: object) -> np.random.Generator:
    """Return a Generator unique to (seed, labels), stable across runs."""
    return np.random.default_rng(np.random.SeedSequence(derive_entropy(seed, *labels)))


def subseed(seed: int, *labels: object) -> int:
    """Derive a plain integer seed for APIs that take one."""
    return int(substream(seed, *labels).integers(0, 2**63 - 1))
