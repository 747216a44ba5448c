import numpy as np
import pytest
from hypothesis import given, strategies as st
from pytest import approx

from uavchan.pathloss import PathLossSample
from uavchan.stats import InsufficientData, ecdf, ecdf_at, normal_fit, summarize_sweep


def test_ecdf_examples():
    assert ecdf([5]) == [(5.0, 1.0)]
    assert [p for _, p in ecdf([4, 1, 3, 2])] == [0.25, 0.5, 0.75, 1.0]
    assert ecdf([1, 2, 2, 3]) == [(1.0, 0.25), (2.0, 0.75), (3.0, 1.0)]
    with pytest.raises(ValueError):
        ecdf([])


def test_ecdf_at_right_continuous():
    assert list(ecdf_at([1, 2, 2, 3], [0.5, 1, 2, 2.5, 3])) == [0.0, 0.25, 0.75, 0.75, 1.0]


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200))
def test_ecdf_monotone(values):
    probs = [p for _, p in ecdf(values)]
    assert probs == sorted(probs) and probs[-1] == 1.0


def test_normal_fit_examples():
    assert normal_fit([10, 10, 10]) == normal_fit([10.0, 10.0, 10.0])
    f = normal_fit([10, 10, 10])
    assert (f.mu, f.sigma, f.n) == (10.0, 0.0, 3)
    f = normal_fit([0, 2])
    assert (f.mu, f.sigma) == (1.0, 1.0)
    with pytest.raises(InsufficientData):
        normal_fit([3.0])


def test_normal_fit_round_trip():
    x = np.random.default_rng(0).normal(73.5, 8.03, 100_000)
    f = normal_fit(x)
    se = 8.03 / np.sqrt(x.size)
    assert f.mu == approx(73.5, abs=0.1)
    assert abs(f.mu - 73.5) < 3 * se
    assert f.sigma == approx(8.03, abs=0.1)


@given(st.lists(st.floats(-100, 100), min_size=2, max_size=50), st.floats(-50, 50), st.floats(0.1, 10))
def test_normal_fit_equivariance(values, shift, scale):
    f = normal_fit(values)
    g = normal_fit([v + shift for v in values])
    h = normal_fit([v * scale for v in values])
    assert g.mu == approx(f.mu + shift, abs=1e-9)
    assert g.sigma == approx(f.sigma, abs=1e-7)
    assert h.sigma == approx(f.sigma * scale, rel=1e-7, abs=1e-9)


def _sample(pl, wr=0, clipped=False):
    return PathLossSample(0.0, 50.0, pl, wr, 1.0, 1.0, 1.0, 0.0, 0.0, clipped)


def test_summarize_sweep():
    s = summarize_sweep([_sample(70, 0), _sample(80, 2), _sample(330, 1, True), _sample(75, 2)])
    assert s.clipped == 1
    assert s.wr_histogram == {0: 1, 1: 1, 2: 2}
    assert s.fit.mu == approx(75.0) and s.fit.n == 3


def test_summarize_all_clipped():
    with pytest.raises(InsufficientData, match="clipped"):
        summarize_sweep([_sample(300, clipped=True)] * 4)
    with pytest.raises(ValueError):
        summarize_sweep([])
