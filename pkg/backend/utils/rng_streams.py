"""backend.utils.rng_streams
+------------------------------------------------
Counter-based random substreams derived from one master seed.

A stream is addressed by the master seed plus a tuple of non-negative
integers (its spawn key), e.g. ``(STUDY_DATA, cell, replication)``.
Streams with different keys are statistically independent and do not
depend on the order in which they are created, so replications and
bootstrap draws can run in any order or in parallel and still give
bit-identical results.

Example
-------
>>> from backend.utils.rng_streams import substream, BOOTSTRAP_SIGNS
>>> rng = substream(7, BOOTSTRAP_SIGNS, 3)
>>> rng.integers(0, 2, size=4).shape
(4,)
"""

import numpy as np

from backend.exceptions import DomainError

# Stream families. Values are part of the reproducibility contract.
APPROX_DIRECTIONS: int = 0
MEDIAN_REFINEMENT: int = 1
BOOTSTRAP_SIGNS: int = 2
STUDY_DATA: int = 3
STUDY_TEST: int = 4
MODEL_SAMPLE: int = 5
OPTIMAL_ALPHA: int = 6
ENCLOSING_BALL: int = 7
SEQUENCE_DRAWS: int = 8


def _seed_sequence(seed: int, key: tuple[int, ...]) -> np.random.SeedSequence:
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")
    if any(k < 0 for k in key):
        raise DomainError(f"stream key entries must be non-negative, got {key}")
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))


def substream(seed: int, *key: int) -> np.random.Generator:
    """Return the generator addressed by ``(seed, key)``."""
    return np.random.default_rng(_seed_sequence(seed, key))


def derive_seed(seed: int, *key: int) -> int:
    """Return a 32-bit integer seed addressed by ``(seed, key)``.

    Used where a whole procedure (median search, a test run) takes an
    integer seed of its own.
    """
    return int(_seed_sequence(seed, key).generate_state(1, dtype=np.uint32)[0])
