"""Seeded sampling knobs for randomized certificates"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from app.config import settings


@dataclass
class Probe:
    """Tolerance, sample counts and a seeded generator for black-box checks.

    All randomized checks draw from `rng`, so a fixed seed reproduces every
    tuple and evaluation point.
    """

    seed: int = field(default_factory=lambda: settings.SEED)
    tol: float = field(default_factory=lambda: settings.TOLERANCE)
    samples: int = field(default_factory=lambda: settings.RANDOM_SAMPLES)
    radius: int = field(default_factory=lambda: settings.SAMPLE_RADIUS)
    points: int = field(default_factory=lambda: settings.EVALUATION_POINTS)
    rng: Optional[np.random.Generator] = None

    def __post_init__(self):
        if self.rng is None:
            self.rng = np.random.default_rng(self.seed)

    def integers(self, low: int, high: int, size: int) -> list:
        """Python ints uniformly drawn from [low, high]"""
        return [int(v) for v in self.rng.integers(low, high + 1, size=size)]

    def reals(self, r: int, count: int) -> np.ndarray:
        """`count` points of [-radius, radius]^r"""
        return self.rng.uniform(-self.radius, self.radius, size=(count, r))
