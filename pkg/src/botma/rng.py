"""Seeded random streams.

Every stochastic routine takes an integer seed. Sub-streams (Monte Carlo
run ``i``, sweep point ``j``) are keyed by the tuple ``(seed, i)`` through
numpy's ``SeedSequence``, so results never depend on the order or thread
in which streams are consumed.
"""

import numpy as np

U64_MAX = 2**64 - 1


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Philox (counter-based) generator keyed by ``(seed, *stream)``."""
    key = (seed, *stream)
    if any(k < 0 or k > U64_MAX for k in key):
        raise ValueError(f"seed components must be in [0, 2**64), got {key}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(key))))


def derive_seed(base_seed: int, index: int) -> int:
    """64-bit child seed for sub-stream ``index`` of ``base_seed``.

    Two 32-bit words from ``SeedSequence([base_seed, index])``, high word
    first.
    """
    if base_seed < 0 or index < 0:
        raise ValueError("base_seed and index must be non-negative")
    hi, lo = np.random.SeedSequence([base_seed, index]).generate_state(2, np.uint32)
    return (int(hi) << 32) | int(lo)
