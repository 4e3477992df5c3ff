"""Keyed, platform-independent random streams.

Every stochastic component draws from a Philox generator whose 128-bit key is a
hash of a tuple of labels, so a stream is fully determined by e.g.
``("sk", n, seed)`` or ``("sample", seed, block)`` regardless of process, thread
count or platform.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stream_key(*labels: object) -> tuple[int, int]:
    digest = hashlib.blake2b(repr(labels).encode("utf-8"), digest_size=16).digest()
    return int.from_bytes(digest[:8], "little"), int.from_bytes(digest[8:], "little")


def keyed_generator(*labels: object) -> np.random.Generator:
    """Return a fresh generator for the stream named by ``labels``."""
    lo, hi = stream_key(*labels)
    return np.random.Generator(np.random.Philox(key=np.array([lo, hi], dtype=np.uint64)))


def derive_seed(*labels: object) -> int:
    """A 63-bit integer seed derived from ``labels`` (for records and sub-runs)."""
    lo, _ = stream_key(*labels)
    return lo & ((1 << 63) - 1)
