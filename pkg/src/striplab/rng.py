"""Reproducible, splittable random streams.

Every stochastic routine in the package takes an RngStream (or a bare
numpy Generator).  Identical (seed, stream_id) always reproduce the same
variate sequence; distinct stream_ids are statistically independent, so
parallel replicas simply own consecutive stream ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(entropy=(int(self.seed), int(self.stream_id)))
        object.__setattr__(self, "_gen", np.random.Generator(np.random.PCG64(ss)))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def split(self, k: int) -> list["RngStream"]:
        """k fresh streams derived from this one (ids offset deterministically)."""
        base = (self.stream_id + 1) * 1_000_003
        return [RngStream(self.seed, base + i) for i in range(k)]


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a Generator, or an int seed."""
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator
    raise TypeError(f"cannot interpret {rng!r} as a random stream")
