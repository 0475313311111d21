import pytest
from hypothesis import given
from hypothesis import strategies as st

from siqkd.errors import DomainError
from siqkd.link import LinkParams, basis_efficiencies, channel_efficiency


def test_lossless():
    assert channel_efficiency(LinkParams(total_distance=0.0)) == 1.0


def test_twenty_db_per_side():
    assert channel_efficiency(LinkParams(total_distance=250.0)) == pytest.approx(0.01, rel=1e-15)


def test_per_side_loss():
    # 16 dB per side at 200 km total, 32 dB per side at 400 km
    assert channel_efficiency(LinkParams(total_distance=200.0)) == pytest.approx(10**-1.6, rel=1e-14)
    assert channel_efficiency(LinkParams(total_distance=200.0)) == pytest.approx(0.02512, abs=5e-6)
    assert channel_efficiency(LinkParams(total_distance=400.0)) == pytest.approx(10**-3.2, rel=1e-14)


def test_basis_split():
    eff = basis_efficiencies(LinkParams(total_distance=250.0, p_z=0.5))
    assert eff.eta_z == pytest.approx(0.004, rel=1e-14)
    assert eff.eta_x == pytest.approx(0.004, rel=1e-14)
    eff = basis_efficiencies(LinkParams(total_distance=250.0, p_z=0.3))
    assert eff.eta_z == pytest.approx(0.3 * 0.008, rel=1e-14)


def test_degenerate_basis():
    assert basis_efficiencies(LinkParams(p_z=1.0)).eta_x == 0.0


@given(st.floats(0, 1000), st.floats(0, 1000), st.floats(0.01, 1.0))
def test_monotone_in_distance(a, b, alpha):
    lo, hi = sorted((a, b))
    ea = channel_efficiency(LinkParams(alpha_db_per_km=alpha, total_distance=lo))
    eb = channel_efficiency(LinkParams(alpha_db_per_km=alpha, total_distance=hi))
    assert eb <= ea
    if hi - lo > 1e-6:
        assert eb < ea


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 500))
def test_total_preserved(p_z, eta_det, distance):
    link = LinkParams(p_z=p_z, eta_det=eta_det, total_distance=distance)
    eff = basis_efficiencies(link)
    assert abs(eff.eta_z + eff.eta_x - eta_det * eff.eta_cha) <= 1e-12


@pytest.mark.parametrize("kw", [{"eta_det": 1.3}, {"p_d": -0.1}, {"total_distance": -1}, {"routing": "x"}])
def test_invalid(kw):
    with pytest.raises(DomainError):
        LinkParams(**kw)


def test_routing_factor():
    assert LinkParams(routing="passive").count_factor == 0.5
    assert LinkParams().count_factor == 1.0
    assert LinkParams(p_z=0.3).p_x == pytest.approx(0.7)
