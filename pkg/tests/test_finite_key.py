import math

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.stats import binom

from siqkd.errors import DomainError
from siqkd.finite_key import (
    FiniteKeyBudget,
    SiftedCounts,
    binary_entropy,
    bounded_error_rate,
    chernoff_upper,
    gamma_u,
    key_length_si,
    phase_error_si,
)

mpmath.mp.dps = 50
BUDGET = FiniteKeyBudget(n_pulses=1e12, f=1.16, eps_cor=1e-15, eps_sec=1e-10)


def mp_gamma_u(n, k, lam, eps):
    n, k, lam, eps = map(mpmath.mpf, (n, k, lam, eps))
    a = max(n, k)
    g = (n + k) / (n * k) * mpmath.log((n + k) / (2 * mpmath.pi * n * k * lam * (1 - lam) * eps**2))
    num = (1 - 2 * lam) * a * g / (n + k) + mpmath.sqrt(a**2 * g**2 / (n + k) ** 2 + 4 * lam * (1 - lam) * g)
    return num / (2 + 2 * a**2 * g / (n + k) ** 2)


def test_entropy_anchors():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0


def test_entropy_against_mpmath():
    x = mpmath.mpf("0.11")
    exact = -x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2)
    assert binary_entropy(0.11) == pytest.approx(float(exact), rel=1e-14)
    assert binary_entropy(0.11) == pytest.approx(0.49992, abs=5e-6)


@pytest.mark.parametrize("x", [-0.1, 1.1, math.nan])
def test_entropy_domain(x):
    with pytest.raises(DomainError):
        binary_entropy(x)


@given(st.floats(0, 1))
def test_entropy_symmetric(x):
    assume(1 - (1 - x) == x)
    assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-15)


def test_chernoff_zero_mean():
    assert chernoff_upper(0.0, 1e-10) == -math.log(1e-10)
    assert chernoff_upper(0.0, 1e-10) == pytest.approx(23.0259, abs=5e-5)


def test_chernoff_large_count():
    beta = mpmath.log(mpmath.mpf(10) ** 10)
    exact = 10**6 + beta / 2 + mpmath.sqrt(2 * beta * 10**6 + beta**2 / 4)
    assert chernoff_upper(1e6, 1e-10) == pytest.approx(float(exact), rel=1e-14)
    assert chernoff_upper(1e6, 1e-10) == pytest.approx(1.00680e6, rel=5e-6)


def test_chernoff_half():
    beta = math.log(2)
    expected = 1e6 + beta / 2 + math.sqrt(2 * beta * 1e6 + beta**2 / 4)
    assert chernoff_upper(1e6, 0.5) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n,p,eps", [(1000, 0.01, 1e-3), (10_000, 0.05, 1e-6), (200, 0.2, 0.05)])
def test_chernoff_respects_binomial_tail(n, p, eps):
    bound = chernoff_upper(n * p, eps)
    assert binom.sf(math.floor(bound), n, p) <= eps


@given(st.floats(0, 1e12), st.floats(1e-15, 0.99), st.floats(1e-15, 0.99))
def test_chernoff_properties(x, e1, e2):
    assume(e1 < e2 * (1 - 1e-9))
    assert chernoff_upper(x, e1) >= x
    assert chernoff_upper(x, e1) > chernoff_upper(x, e2)


@pytest.mark.parametrize("bad", [(-1.0, 0.1), (1.0, 0.0), (1.0, 1.0)])
def test_chernoff_domain(bad):
    with pytest.raises(DomainError):
        chernoff_upper(*bad)


def test_gamma_u_example():
    value = gamma_u(1e5, 1e5, 0.02, 1e-10)
    assert value == pytest.approx(float(mp_gamma_u(1e5, 1e5, 0.02, 1e-10)), rel=1e-12)
    assert value == pytest.approx(4.0e-3, abs=5e-5)


@given(st.floats(1, 1e12), st.floats(1, 1e12), st.floats(1e-6, 0.5), st.floats(1e-15, 1e-2))
def test_gamma_u_matches_high_precision(n, k, lam, eps):
    try:
        value = gamma_u(n, k, lam, eps)
    except DomainError:
        return
    assert value > 0
    assert value == pytest.approx(float(mp_gamma_u(n, k, lam, eps)), rel=1e-9)


@pytest.mark.parametrize("lam", [0.0, 1.0, -0.1])
def test_gamma_u_lambda_domain(lam):
    with pytest.raises(DomainError):
        gamma_u(1e5, 1e5, lam, 1e-10)


def test_gamma_u_vacuous_log():
    with pytest.raises(DomainError):
        gamma_u(1e6, 1e6, 0.5, 0.5)


@pytest.mark.parametrize("lam", [0.01, 0.05, 0.2])
def test_gamma_u_shrinks_with_data(lam):
    sizes = [1e3, 1e4, 1e5, 1e6, 1e7]
    for k in sizes:
        series = [gamma_u(n, k, lam, 1e-10) for n in sizes]
        assert all(b < a for a, b in zip(series, series[1:]))
    for n in sizes:
        series = [gamma_u(n, k, lam, 1e-10) for k in sizes]
        assert all(b < a for a, b in zip(series, series[1:]))


def test_phase_error_example():
    counts = SiftedCounts(n_z=1e5, n_x=1e5, m_z=0.0, m_x=2e3)
    phi = phase_error_si(counts, 2e-10)
    assert phi == pytest.approx(0.02 + float(mp_gamma_u(1e5, 1e5, 0.02, 1e-10)), rel=1e-12)
    assert phi == pytest.approx(0.024, abs=5e-5)


def test_phase_error_clamped():
    assert phase_error_si(SiftedCounts(1e5, 1e5, 0.0, 5e4), 1e-10) == 0.5


def test_phase_error_without_estimation_data():
    assert phase_error_si(SiftedCounts(1e5, 0.0, 0.0, 0.0), 1e-10) == 0.5


def test_phase_error_zero_observed_errors():
    counts = SiftedCounts(n_z=1e6, n_x=1e6, m_z=0.0, m_x=0.0)
    assert phase_error_si(counts, 1e-10) == pytest.approx(gamma_u(1e6, 1e6, 0.5e-6, 5e-11), rel=1e-15)


def test_bounded_error_rate_falls_back_on_domain_error():
    assert bounded_error_rate(0.1, 1e6, 1e6, 1e-3, 0.5) == 0.5


def test_key_length_zero_noise():
    counts = SiftedCounts(n_z=1e6, n_x=1e6, m_z=0.0, m_x=0.0)
    constant = mpmath.log(2 / mpmath.mpf("1e-15"), 2) + 2 * mpmath.log(1 / mpmath.mpf("1e-10"), 2)
    assert key_length_si(counts, 0.0, BUDGET) == int(mpmath.floor(10**6 - constant))
    assert key_length_si(counts, 0.0, BUDGET) == 999882


def test_key_length_degenerate():
    assert key_length_si(SiftedCounts(1e6, 1e6, 0.0, 0.0), 0.5, BUDGET) == 0
    assert key_length_si(SiftedCounts(0.0, 1e6, 0.0, 0.0), 0.0, BUDGET) == 0


counts_st = st.builds(
    lambda n, frac: SiftedCounts(n_z=n, n_x=n, m_z=n * frac, m_x=n * frac),
    st.floats(0, 1e12),
    st.floats(0, 0.5),
)


@given(counts_st, st.floats(0, 0.5), st.floats(0, 0.5))
def test_key_length_nonincreasing_in_phase_error(counts, a, b):
    lo, hi = sorted((a, b))
    assert key_length_si(counts, hi, BUDGET) <= key_length_si(counts, lo, BUDGET)


@given(st.floats(1, 1e12), st.floats(0, 0.5), st.floats(0, 0.5), st.floats(0, 0.5))
def test_key_length_nonincreasing_in_qber(n, e1, e2, phi):
    lo, hi = sorted((e1, e2))
    a = key_length_si(SiftedCounts(n, n, n * lo, 0.0), phi, BUDGET)
    b = key_length_si(SiftedCounts(n, n, n * hi, 0.0), phi, BUDGET)
    assert b <= a


@given(st.floats(1, 1e12), st.floats(1, 1e12), st.floats(0, 0.2), st.floats(0, 0.3))
def test_key_length_nondecreasing_in_counts(n1, n2, e, phi):
    lo, hi = sorted((n1, n2))
    a = key_length_si(SiftedCounts(lo, lo, lo * e, 0.0), phi, BUDGET)
    b = key_length_si(SiftedCounts(hi, hi, hi * e, 0.0), phi, BUDGET)
    assert b >= a
    assert isinstance(a, int) and 0 <= a <= lo


def test_budget_validation():
    with pytest.raises(DomainError):
        FiniteKeyBudget(eps_sec=0.0)
    with pytest.raises(DomainError):
        FiniteKeyBudget(f=0.9)
    with pytest.raises(DomainError):
        SiftedCounts(n_z=1.0, n_x=1.0, m_z=2.0, m_x=0.0)
