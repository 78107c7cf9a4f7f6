"""Named deterministic random streams.

Every randomized component draws from its own stream derived from
(master seed, component name), so experiments replay bit-exactly no
matter how many components share one master seed.
"""

from __future__ import annotations

import hashlib
import math
import random

_U64 = 2.0 ** -64


def stream(seed: int, *names) -> random.Random:
    """Random generator for a named sub-stream of `seed`."""
    tag = ":".join(str(p) for p in names)
    digest = hashlib.sha256(f"{seed}|{tag}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def exp_draw(rng: random.Random, rate: float) -> float:
    """Exponential(rate) sample via inverse transform of a 64-bit uniform."""
    if rate <= 0.0:
        raise ValueError(f"rate must be positive, got {rate}")
    u = (rng.getrandbits(64) + 1) * _U64  # uniform in (0, 1]
    return -math.log(u) / rate
