"""Single-photon-source BB84 baseline.

Alice prepares Z with probability ``q_z`` and Bob measures Z with
probability ``p_z``. The X basis carries the key and Z is used for
parameter estimation. Multi-photon emissions are assumed to be detected
and are removed from the sifted counts via a Chernoff upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from siqkd.errors import DomainError, NoConvergence
from siqkd.finite_key import (
    FiniteKeyBudget,
    binary_entropy,
    bounded_error_rate,
    chernoff_upper,
)
from siqkd.link import click_probability
from siqkd.sources import PhotonNumberDistribution

FIXED_POINT_TOL = 1e-15
FIXED_POINT_MAX_ITER = 100


@dataclass(frozen=True)
class Bb84Params:
    """Basis choices, source attenuation and detector dead-time settings.

    ``rep_rate`` in Hz and ``dead_time`` in s; with ``dead_time = 0`` the
    dead-time correction is inactive.
    """

    q_z: float = 0.5
    p_z: float = 0.5
    eta_att: float = 1.0
    rep_rate: float = 0.0
    dead_time: float = 0.0
    p_mis: float = 0.01
    p_d: float = 1e-7

    def __post_init__(self) -> None:
        for name in ("q_z", "p_z", "eta_att", "p_mis", "p_d"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name}={value!r} outside [0, 1]")
        if not (self.rep_rate >= 0 and self.dead_time >= 0):
            raise DomainError("rep_rate and dead_time must be >= 0")

    @property
    def q_x(self) -> float:
        return 1.0 - self.q_z

    @property
    def p_x(self) -> float:
        return 1.0 - self.p_z


@dataclass(frozen=True)
class Bb84EpsBudget:
    """Secrecy budget split as PA + PE + EC with two estimation constraints."""

    eps_prime: float
    n_pe: int = 2

    @classmethod
    def from_eps_sec(cls, eps_sec: float) -> "Bb84EpsBudget":
        return cls(eps_prime=eps_sec / 6.0)

    @property
    def eps_pa(self) -> float:
        return self.eps_prime

    @property
    def eps_pe(self) -> float:
        return 2 * self.n_pe * self.eps_prime

    @property
    def eps_ec(self) -> float:
        return self.eps_prime

    @property
    def eps_sec(self) -> float:
        return self.eps_pa + self.eps_pe + self.eps_ec


@dataclass(frozen=True)
class Bb84Counts:
    n_z: float
    n_x: float
    m_z: float
    m_x: float

    @property
    def e_x(self) -> float:
        return self.m_x / self.n_x if self.n_x > 0 else 0.0


@dataclass(frozen=True)
class MultiphotonBounds:
    mp_upper_z: float
    mp_upper_x: float
    nmp_lower_z: float
    nmp_lower_x: float


def _detection_terms(dist: PhotonNumberDistribution, eta_tot: float, params: Bb84Params) -> list[float]:
    eta = eta_tot * params.eta_att
    return [p * click_probability(n, eta, params.p_d) for n, p in enumerate(dist.probs)]


def _dead_time_fixed_point(s: float, rt: float) -> float:
    """Solve ``q = s / (1 + rt*q)`` by iteration from ``q = s``."""
    q = s
    if rt == 0.0:
        return q
    for _ in range(FIXED_POINT_MAX_ITER):
        nxt = s / (1.0 + rt * q)
        if abs(nxt - q) <= FIXED_POINT_TOL:
            return nxt
        q = nxt
    raise NoConvergence(f"dead-time fixed point unresolved for R*tau={rt!r}, S={s!r}")


def bb84_gain(dist: PhotonNumberDistribution, eta_tot: float, params: Bb84Params) -> float:
    """Dead-time-corrected detection probability per pulse (either basis)."""
    s = math.fsum(_detection_terms(dist, eta_tot, params))
    return _dead_time_fixed_point(s, params.rep_rate * params.dead_time)


def bb84_error_gain(dist: PhotonNumberDistribution, eta_tot: float, params: Bb84Params) -> float:
    """Error gain sharing the dead-time factor of :func:`bb84_gain`."""
    q = bb84_gain(dist, eta_tot, params)
    c_dt = 1.0 / (1.0 + params.rep_rate * params.dead_time * q)
    terms = _detection_terms(dist, eta_tot, params)
    return c_dt * (dist.p0 * params.p_d + params.p_mis * math.fsum(terms[1:]))


def bb84_counts(
    n_pulses: float, dist: PhotonNumberDistribution, eta_tot: float, params: Bb84Params
) -> Bb84Counts:
    q = bb84_gain(dist, eta_tot, params)
    qe = bb84_error_gain(dist, eta_tot, params)
    wz = n_pulses * params.p_z * params.q_z
    wx = n_pulses * params.p_x * params.q_x
    return Bb84Counts(n_z=wz * q, n_x=wx * q, m_z=wz * qe, m_x=wx * qe)


def bb84_multiphoton_bounds(
    n_pulses: float,
    params: Bb84Params,
    dist: PhotonNumberDistribution,
    eps_pe: float,
    counts: Bb84Counts,
) -> MultiphotonBounds:
    """Chernoff upper bound on multi-photon detections in each basis.

    Uses ``p_m = g2 <n>^2 / 2`` of the source before attenuation.
    """
    p_m = dist.g2 * dist.mean * dist.mean / 2.0
    mp_z = chernoff_upper(n_pulses * params.p_z * params.q_z * p_m, eps_pe)
    mp_x = chernoff_upper(n_pulses * params.p_x * params.q_x * p_m, eps_pe)
    return MultiphotonBounds(
        mp_upper_z=mp_z,
        mp_upper_x=mp_x,
        nmp_lower_z=max(0.0, counts.n_z - mp_z),
        nmp_lower_x=max(0.0, counts.n_x - mp_x),
    )


def bb84_phase_error(counts: Bb84Counts, bounds: MultiphotonBounds, eps_sec: float) -> float:
    """X-basis phase-error bound from the Z-basis errors on non-multi-photon events.

    All Z errors are attributed to the non-multi-photon events.
    """
    nz, nx = bounds.nmp_lower_z, bounds.nmp_lower_x
    if nz < 1 or nx < 1:
        return 0.5
    e_nmp = counts.m_z / nz
    return bounded_error_rate(e_nmp, nx, nz, 0.5 / nz, eps_sec / 6.0)


def bb84_key_length_raw(
    counts: Bb84Counts, bounds: MultiphotonBounds, phi_x: float, budget: FiniteKeyBudget
) -> float:
    if counts.n_x <= 0 or bounds.nmp_lower_x <= 0:
        return 0.0
    eps = Bb84EpsBudget.from_eps_sec(budget.eps_sec)
    phi = min(max(phi_x, 0.0), 0.5)
    return (
        bounds.nmp_lower_x * (1.0 - binary_entropy(phi))
        - counts.n_x * budget.f * binary_entropy(min(counts.e_x, 1.0))
        - math.log2(2.0 / budget.eps_cor)
        - 2.0 * math.log2(1.0 / (2.0 * eps.eps_pa))
    )


def bb84_key_length(
    counts: Bb84Counts, bounds: MultiphotonBounds, phi_x: float, budget: FiniteKeyBudget
) -> int:
    raw = bb84_key_length_raw(counts, bounds, phi_x, budget)
    return int(math.floor(raw)) if raw > 0 else 0
