"""Deterministic seed derivation.

Every randomized operation in this package takes an explicit 64-bit seed.
Sub-seeds for nested stages are derived by hashing the parent seed together
with a string label, so runs are reproducible and stages are decoupled:
changing how many random draws one stage makes never shifts another stage's
stream.
"""

from __future__ import annotations

import hashlib
import random

MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *labels: object) -> int:
    """Derive a child seed from ``seed`` and a sequence of labels."""
    h = hashlib.sha256()
    h.update(str(int(seed) & MASK64).encode())
    for label in labels:
        h.update(b"/")
        h.update(str(label).encode())
    return int.from_bytes(h.digest()[:8], "big")


def rng_for(seed: int, *labels: object) -> random.Random:
    """A ``random.Random`` stream for one named stage of a seeded run."""
    return random.Random(derive_seed(seed, *labels))
