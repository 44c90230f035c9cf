"""
Random stream derivation.

Every random draw in rhgTool comes from a Philox generator keyed by a
SeedSequence, so a stream depends only on (seed, key) and never on the
order in which trials or audits are executed.
"""
import numpy as np

SEED_MASK = (1 << 64) - 1


def trial_seed(master_seed, trial):
    """64-bit seed of trial `trial` under `master_seed`.

    Cells of a scan share trial seeds, which makes comparisons across n or
    alpha paired by trial index.
    """
    seq = np.random.SeedSequence(entropy=int(master_seed) & SEED_MASK, spawn_key=(int(trial),))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def stream(seed, *key):
    """Generator for `seed`, optionally split into an independent sub-stream by `key`.

    Example usage:
        rng = stream(params.seed)                  # the point process
        rng = stream(params.seed, "audit", 3)      # a Monte Carlo audit
    """
    spawn_key = tuple(_key_part(part) for part in key)
    seq = np.random.SeedSequence(entropy=int(seed) & SEED_MASK, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(seq))


def _key_part(part):
    if isinstance(part, str):
        # stable across interpreter runs, unlike hash()
        return int.from_bytes(part.encode("utf-8"), "little") & SEED_MASK
    return int(part)
