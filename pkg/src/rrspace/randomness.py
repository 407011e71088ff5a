"""Seeded randomness shared by every Las Vegas routine."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput

RNG_ALGORITHM = "PCG64"
DEFAULT_RETRY_BUDGET = 8


@dataclass
class RngConfig:
    """Seed, sample set size and retry budget, plus the live generator.

    Draws come from {0, ..., sample_set_size - 1}; when the size is left as
    None it defaults to the whole field.
    """

    seed: int = 0
    sample_set_size: int | None = None
    retry_budget: int = DEFAULT_RETRY_BUDGET
    _gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise InvalidInput("seed must fit in 64 bits")
        if self.retry_budget < 1:
            raise InvalidInput("retry budget must be at least 1")
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def size_for(self, p: int) -> int:
        n = p if self.sample_set_size is None else self.sample_set_size
        if not 2 <= n <= p:
            raise InvalidInput(f"sample set size {n} must lie in [2, {p}]")
        return n

    def element(self, p: int) -> int:
        # Generator.integers rejects out-of-range candidates, so draws are uniform
        return int(self._gen.integers(0, self.size_for(p)))

    def nonzero_vector(self, length: int, p: int) -> list[int]:
        """Uniform draw from the sample set to the power length, minus zero."""
        while True:
            vec = [self.element(p) for _ in range(length)]
            if any(vec):
                return vec

    def describe(self) -> str:
        size = "p" if self.sample_set_size is None else str(self.sample_set_size)
        return (f"rng={RNG_ALGORITHM} seed={self.seed} sample_set_size={size} "
                f"retries={self.retry_budget}")
