from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable

import numpy as np
import numpy.typing as npt

from hbfsim.core.base import DomainError

REPORTED_PERCENTILES = (10, 50, 90, 95)


@dataclass(frozen=True, slots=True)
class CdfSeries:
    """Empirical CDF: the i-th smallest of n values has probability i/n."""

    values: npt.NDArray[np.float64]
    probabilities: npt.NDArray[np.float64]

    def percentile(self, p: float) -> float:
        """Linearly interpolated percentile, ``p`` in [0, 100]."""
        if not 0.0 <= p <= 100.0:
            raise DomainError(f"Percentile must be within [0, 100], got {p}.")
        return float(np.percentile(self.values, p, method="linear"))

    def probability_at(self, value: float) -> float:
        """Fraction of samples not exceeding ``value``."""
        return float(np.searchsorted(self.values, value, side="right") / self.values.size)

    @property
    def p10(self) -> float:
        return self.percentile(10)

    @property
    def p50(self) -> float:
        return self.percentile(50)

    @property
    def p90(self) -> float:
        return self.percentile(90)

    @property
    def p95(self) -> float:
        return self.percentile(95)

    def summary(self) -> Dict[str, float]:
        stats = {f"p{p}": self.percentile(p) for p in REPORTED_PERCENTILES}
        stats["mean"] = float(np.mean(self.values))
        stats["count"] = int(self.values.size)
        return stats


def cdf(values: Iterable[float]) -> CdfSeries:
    data = np.sort(np.asarray(list(values), dtype=float), kind="stable")
    if data.size == 0:
        raise DomainError("Cannot build a CDF from no values.")
    probabilities = np.arange(1, data.size + 1, dtype=float) / data.size
    return CdfSeries(values=data, probabilities=probabilities)


__all__ = ["REPORTED_PERCENTILES", "CdfSeries", "cdf"]
