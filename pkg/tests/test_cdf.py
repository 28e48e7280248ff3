import numpy as np
import pytest

from hbfsim.core.base import DomainError
from hbfsim.harness.cdf import cdf


def test_single_value():
    series = cdf([5.0])
    assert series.probability_at(5.0) == 1.0
    assert series.probabilities.tolist() == [1.0]


def test_median_interpolates():
    series = cdf([4.0, 1.0, 3.0, 2.0])
    assert series.values.tolist() == [1.0, 2.0, 3.0, 4.0]
    assert series.probabilities.tolist() == [0.25, 0.5, 0.75, 1.0]
    assert series.p50 == pytest.approx(2.5)


def test_uniform_percentile(rng):
    assert cdf(rng.random(10_000)).p90 == pytest.approx(0.9, abs=0.02)


def test_summary_keys():
    stats = cdf(np.arange(1.0, 11.0)).summary()
    assert set(stats) == {"p10", "p50", "p90", "p95", "mean", "count"}
    assert stats["count"] == 10 and stats["mean"] == pytest.approx(5.5)


def test_invalid_input():
    with pytest.raises(DomainError):
        cdf([])
    with pytest.raises(DomainError):
        cdf([1.0, 2.0]).percentile(101)
