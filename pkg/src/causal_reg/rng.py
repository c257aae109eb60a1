"""Seed derivation: reproducible child seeds for replications, folds and chunks."""

from __future__ import annotations

import numpy as np

from causal_reg.errors import InvalidInput


def _check(seed: int) -> int:
    seed = int(seed)
    if seed < 0 or seed >= 2**64:
        raise InvalidInput(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def derive_seed(seed: int, *keys: int) -> int:
    """A 64-bit seed determined only by (seed, *keys)."""
    ss = np.random.SeedSequence([_check(seed), *(int(k) for k in keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([_check(seed), *(int(k) for k in keys)]))
