"""Deterministic substream derivation for all Monte-Carlo code.

Every stochastic routine in the package draws from a counter-based
generator whose key is derived from (seed, purpose tag, indices...).
Two consequences, both load-bearing for reproducibility guarantees:

* a Brownian path, a volume sample batch, a Bernoulli mask etc. is a
  pure function of the seed and its own indices — worker count, batch
  size and evaluation order cannot change any result;
* distinct purposes never share a stream, so e.g. path sampling and
  volume sampling with the same user seed stay independent.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

__all__ = ["stream_key", "substream"]


def stream_key(seed: int, *fields: int | str) -> tuple[int, int]:
    """Derive a 128-bit Philox key from a seed and a field tuple.

    Fields may be integers (indices) or short strings (purpose tags).
    The packing is injective, so distinct tuples give independent keys.
    """
    parts = [b"I" + struct.pack("<Q", seed & 0xFFFFFFFFFFFFFFFF)]
    for f in fields:
        if isinstance(f, str):
            raw = f.encode("utf-8")
            parts.append(b"S" + struct.pack("<I", len(raw)) + raw)
        else:
            parts.append(b"I" + struct.pack("<q", f))
    digest = hashlib.blake2b(b"".join(parts), digest_size=16).digest()
    lo, hi = struct.unpack("<QQ", digest)
    return lo, hi


def substream(seed: int, *fields: int | str) -> np.random.Generator:
    """A fresh Generator on the substream named by (seed, *fields)."""
    return np.random.Generator(np.random.Philox(key=stream_key(seed, *fields)))
