"""Deterministic random substreams.

Every replicate draws from its own counter-based generator keyed by
``(master_seed, *ids)``, so results do not depend on how work is scheduled.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream"]


def substream(master_seed: int, *ids: int) -> np.random.Generator:
    """Philox generator for the stream identified by ``(master_seed, *ids)``."""
    if master_seed < 0 or any(i < 0 for i in ids):
        raise ValueError("seed and stream ids must be non-negative")
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(i) for i in ids))
    return np.random.Generator(np.random.Philox(ss))
