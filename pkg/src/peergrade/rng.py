"""Deterministic seeding: stable 64-bit hashing and keyed RNG substreams.

Every stochastic stage of a trial draws from its own generator, keyed by
(trial seed, stage tag, ...). Streams therefore do not depend on evaluation
order, which keeps parallel runs bit-reproducible.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["hash64", "substream"]


def _encode(part) -> bytes:
    if isinstance(part, (bool, np.bool_)):
        raise TypeError("bool keys are ambiguous; use an int or str tag")
    if isinstance(part, (int, np.integer)):
        i = int(part)
        raw = i.to_bytes((i.bit_length() + 8) // 8 + 1, "big", signed=True)
        return b"i" + len(raw).to_bytes(4, "big") + raw
    if isinstance(part, str):
        raw = part.encode("utf-8")
        return b"s" + len(raw).to_bytes(4, "big") + raw
    if isinstance(part, bytes):
        return b"b" + len(part).to_bytes(4, "big") + part
    raise TypeError(f"unhashable key part of type {type(part).__name__}")


def hash64(*parts: int | str | bytes) -> int:
    """Platform-stable 64-bit hash of a sequence of ints, strings or bytes."""
    h = hashlib.sha256()
    for part in parts:
        h.update(_encode(part))
    return int.from_bytes(h.digest()[:8], "big")


def substream(*key: int | str | bytes) -> np.random.Generator:
    """Independent PCG64 generator for the given key; same key, same stream."""
    return np.random.Generator(np.random.PCG64(hash64(*key)))
