"""Monte Carlo gate helpers shared by the checks and the harness."""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.stats import norm

DEFAULT_SIGMA = 4.0


@dataclass
class MonteCarloCheck:
    """An empirical estimate against its theoretical value.

    ``stderr`` is the standard error used for the z-score; for binomial
    quantities it is computed from the *predicted* proportion so that an
    exact 0/1 prediction gives a zero-width, exact gate.
    """

    observed: float
    predicted: float
    stderr: float
    samples: int

    @property
    def z(self) -> float:
        diff = self.observed - self.predicted
        if self.stderr == 0:
            return 0.0 if abs(diff) <= 1e-12 else math.copysign(math.inf, diff)
        return diff / self.stderr

    def passed(self, nsigma: float = DEFAULT_SIGMA) -> bool:
        return abs(self.z) <= nsigma

    def upper_passed(self, nsigma: float = DEFAULT_SIGMA) -> bool:
        """One-sided gate: observed <= predicted + nsigma * stderr."""
        return self.z <= nsigma


def binomial_check(hits: int, samples: int, p: float) -> MonteCarloCheck:
    return MonteCarloCheck(hits / samples, p, math.sqrt(max(p * (1 - p), 0.0) / samples), samples)


def bonferroni_sigma(count: int, nsigma: float = DEFAULT_SIGMA) -> float:
    """Two-sided per-test threshold keeping the family-wise rate of an
    ``nsigma`` gate across ``count`` simultaneous tests."""
    if count <= 1:
        return nsigma
    return float(norm.isf(norm.sf(nsigma) / count))
