import math

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from siqkd.errors import CutoffTooSmall, DomainError, InvalidSource
from siqkd.sources import (
    OddCatParams,
    odd_cat_distribution,
    odd_cat_fock_check,
    odd_cat_fock_weights,
    odd_cat_g2,
    odd_cat_mean,
    sps_distribution,
)

mpmath.mp.dps = 40


def test_pure_single_photon():
    d = sps_distribution(1.0, 0.0)
    assert (d.p0, d.p1, d.p2) == (0.0, 1.0, 0.0)


def test_table_source():
    d = sps_distribution(1.0, 0.01)
    assert d.p0 == pytest.approx(0.005, abs=1e-15)
    assert d.p1 == pytest.approx(0.99, abs=1e-15)
    assert d.p2 == pytest.approx(0.005, abs=1e-15)


def test_mean_above_one_rejected():
    with pytest.raises(InvalidSource):
        sps_distribution(1.5, 0.01)


@given(st.floats(1e-3, 1.0), st.floats(0.0, 2.0))
def test_distribution_invariants(mean, g2):
    assume(g2 * mean * mean / 2 <= 1 - mean + g2 * mean * mean / 2)
    try:
        d = sps_distribution(mean, g2)
    except InvalidSource:
        # only legitimate when p1 or p0 is negative
        p2 = g2 * mean**2 / 2
        assert mean - 2 * p2 < 0 or 1 - mean + p2 < -1e-15
        return
    assert abs(d.p0 + d.p1 + d.p2 - 1) <= 1e-12
    assert abs(d.p1 + 2 * d.p2 - mean) <= 1e-12
    assert abs(2 * d.p2 / (d.p1 + 2 * d.p2) ** 2 - g2) <= 1e-9


@pytest.mark.parametrize("mu", [0.5, 1.0, 0.1])
def test_cat_g2_against_mpmath(mu):
    assert odd_cat_g2(mu) == pytest.approx(float(mpmath.tanh(mu) ** 2), rel=1e-14)


def test_cat_g2_values():
    assert odd_cat_g2(0.5) == pytest.approx(0.21355, abs=5e-6)
    assert odd_cat_g2(1.0) == pytest.approx(0.58002, abs=1e-5)
    assert odd_cat_g2(1e-9) == pytest.approx(0.0, abs=1e-17)


@pytest.mark.parametrize("mu", [1e-12, 1e-6, 5e-5, 1e-4, 2e-4, 0.5, 1.0])
def test_cat_mean_against_mpmath(mu):
    exact = float(mpmath.mpf(mu) * mpmath.coth(mu))
    assert odd_cat_mean(mu) == pytest.approx(exact, rel=1e-14)


def test_cat_mean_values():
    assert odd_cat_mean(1.0) == pytest.approx(1.31304, abs=5e-6)
    assert odd_cat_mean(0.5) == pytest.approx(1.08198, abs=5e-6)
    assert odd_cat_mean(1e-300) == 1.0


@pytest.mark.parametrize("fn", [odd_cat_g2, odd_cat_mean, odd_cat_distribution])
@pytest.mark.parametrize("mu", [0.0, -1.0])
def test_cat_domain(fn, mu):
    with pytest.raises(DomainError):
        fn(mu)


def test_cat_params_type():
    with pytest.raises(DomainError):
        OddCatParams(mu=math.inf)
    assert OddCatParams(0.3).mu == 0.3


def test_cat_distribution():
    d = odd_cat_distribution(0.1)
    assert d.g2 == pytest.approx(0.00993, abs=5e-6)
    tiny = odd_cat_distribution(1e-8)
    assert (tiny.p0, tiny.p1, tiny.p2) == pytest.approx((0.0, 1.0, 0.0), abs=1e-15)


@given(st.floats(1e-3, 3.0), st.floats(1e-3, 3.0))
def test_cat_monotone(a, b):
    assume(a < b and b - a > 1e-9)
    assert odd_cat_g2(a) < odd_cat_g2(b)
    assert odd_cat_mean(a) >= 1.0


@pytest.mark.parametrize("mu", [0.05, 0.1, 0.25, 0.5, 1.0])
def test_fock_sum_matches_closed_forms(mu):
    mean, g2 = odd_cat_fock_check(mu, 40)
    assert mean == pytest.approx(odd_cat_mean(mu), rel=1e-9)
    assert g2 == pytest.approx(odd_cat_g2(mu), rel=1e-9)


def test_fock_check_example():
    mean, g2 = odd_cat_fock_check(0.5, 25)
    assert mean == pytest.approx(1.08198, abs=5e-6)
    assert g2 == pytest.approx(0.21355, abs=5e-6)


def test_even_components_vanish():
    weights = odd_cat_fock_weights(1.0, 30)
    assert all(w == 0.0 for w in weights[0::2])
    assert sum(weights) == pytest.approx(1.0, abs=1e-12)


def test_cutoff_too_small():
    with pytest.raises(CutoffTooSmall):
        odd_cat_fock_check(0.5, 2)
