"""Named random streams derived from a single integer seed.

Every consumer of randomness asks for its own stream by name, e.g.
``stream(seed, "block", level, index)``, so adding or reordering work never
shifts the numbers another consumer sees.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFF
    return zlib.crc32(str(part).encode("utf-8"))


def stream(seed: int, *names) -> np.random.Generator:
    """Return an independent generator for ``(seed, *names)``."""
    seq = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=tuple(_key(n) for n in names))
    return np.random.default_rng(seq)


def child_seed(seed: int, *names) -> int:
    """Derive a plain 63-bit integer seed, for handing to code that takes ints."""
    return int(stream(seed, *names).integers(0, 2**63 - 1))
