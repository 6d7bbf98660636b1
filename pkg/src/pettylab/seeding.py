"""Deterministic seed splitting.

A single master seed is turned into independent, named streams with
:class:`numpy.random.SeedSequence`. Keys may be strings or integers; strings
are hashed with CRC32 so the mapping is stable across runs and platforms.
"""
import zlib

import numpy as np


def _key(k):
    if isinstance(k, str):
        return zlib.crc32(k.encode("utf8"))
    k = int(k)
    if k < 0:
        raise ValueError("seed keys must be non-negative")
    return k


def derive_seed(master, *keys):
    """Integer seed for the stream ``keys`` below ``master`` (63-bit)."""
    ss = np.random.SeedSequence([_key(master), *(_key(k) for k in keys)])
    hi, lo = (int(w) for w in ss.generate_state(2, dtype=np.uint32))
    return ((hi << 32) | lo) & ((1 << 63) - 1)


def rng(master, *keys):
    """A fresh Generator for the stream ``keys`` below ``master``."""
    return np.random.default_rng(derive_seed(master, *keys))
