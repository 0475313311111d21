"""Key rate at one distance for fixed protocol parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from siqkd.bb84 import (
    Bb84EpsBudget,
    Bb84Params,
    bb84_counts,
    bb84_key_length_raw,
    bb84_multiphoton_bounds,
    bb84_phase_error,
)
from siqkd.config import RunConfig
from siqkd.errors import DomainError, InvalidSource, NoConvergence
from siqkd.finite_key import (
    FiniteKeyBudget,
    SiftedCounts,
    key_length_si_raw,
    phase_error_si,
)
from siqkd.gains import basis_gains
from siqkd.link import LinkParams
from siqkd.sources import PhotonNumberDistribution, odd_cat_distribution, sps_distribution


@dataclass(frozen=True)
class KeyRatePoint:
    """Result at one distance.

    ``params`` holds the protocol variables (``mean`` or ``mu``, ``p_z``, and
    for the baseline ``eta_att`` and ``q_z``). ``phase_error`` refers to the
    key basis: Z for the SI protocol, X for the baseline. ``raw_key_length``
    is the unfloored value the optimiser climbs on.
    """

    distance: float
    protocol: str
    params: dict[str, float]
    mean_photon: float
    skr: float
    key_length: int
    q_total_z: float
    qber_z: float
    qber_x: float
    phase_error: float
    raw_key_length: float = -math.inf
    diagnostic: str | None = field(default=None, compare=False)


def source_distribution(cfg: RunConfig, params: dict[str, float]) -> PhotonNumberDistribution:
    if cfg.source.type == "odd_cat":
        return odd_cat_distribution(params["mu"])
    return sps_distribution(params["mean"], cfg.source.g2)


def budget_from(cfg: RunConfig) -> FiniteKeyBudget:
    s = cfg.system
    return FiniteKeyBudget(n_pulses=s.N, f=s.f, eps_cor=s.eps_cor, eps_sec=s.eps_sec)


def _zero(protocol: str, params: dict[str, float], distance: float, why: str) -> KeyRatePoint:
    return KeyRatePoint(
        distance=distance,
        protocol=protocol,
        params=dict(params),
        mean_photon=math.nan,
        skr=0.0,
        key_length=0,
        q_total_z=0.0,
        qber_z=0.0,
        qber_x=0.0,
        phase_error=0.5,
        diagnostic=why,
    )


def _finish(raw: float) -> int:
    return int(math.floor(raw)) if raw > 0 else 0


def evaluate_si(cfg: RunConfig, params: dict[str, float], distance: float) -> KeyRatePoint:
    s = cfg.system
    dist = source_distribution(cfg, params)
    link = LinkParams(
        alpha_db_per_km=s.alpha_db_per_km,
        total_distance=distance,
        eta_det=s.eta_det,
        p_d=s.p_d,
        e_d=s.e_d,
        p_z=params["p_z"],
        routing=cfg.protocol.routing,
    )
    gains = basis_gains(dist, link)
    pairs = s.N * link.count_factor
    n_z = pairs * link.p_z**2 * gains.z.total
    n_x = pairs * link.p_x**2 * gains.x.total
    counts = SiftedCounts(n_z=n_z, n_x=n_x, m_z=n_z * gains.z.qber, m_x=n_x * gains.x.qber)
    budget = budget_from(cfg)
    phi = phase_error_si(counts, s.eps_sec)
    raw = key_length_si_raw(counts, phi, budget)
    ell = _finish(raw)
    return KeyRatePoint(
        distance=distance,
        protocol="si",
        params=dict(params),
        mean_photon=dist.mean,
        skr=ell / s.N,
        key_length=ell,
        q_total_z=gains.z.total,
        qber_z=gains.z.qber,
        qber_x=gains.x.qber,
        phase_error=phi,
        raw_key_length=raw,
    )


def evaluate_bb84(cfg: RunConfig, params: dict[str, float], distance: float) -> KeyRatePoint:
    s = cfg.system
    dist = source_distribution(cfg, params)
    bp = Bb84Params(
        q_z=params["q_z"],
        p_z=params["p_z"],
        eta_att=params["eta_att"],
        rep_rate=cfg.protocol.rep_rate,
        dead_time=cfg.protocol.dead_time,
        p_mis=s.e_d,
        p_d=s.p_d,
    )
    # Alice to Bob over the full fibre length.
    eta_tot = s.eta_det * 10.0 ** (-s.alpha_db_per_km * distance / 10.0)
    counts = bb84_counts(s.N, dist, eta_tot, bp)
    eps = Bb84EpsBudget.from_eps_sec(s.eps_sec)
    bounds = bb84_multiphoton_bounds(s.N, bp, dist, eps.eps_pe, counts)
    phi = bb84_phase_error(counts, bounds, s.eps_sec)
    raw = bb84_key_length_raw(counts, bounds, phi, budget_from(cfg))
    ell = _finish(raw)
    q = counts.n_z / (s.N * bp.p_z * bp.q_z) if bp.p_z * bp.q_z > 0 else 0.0
    return KeyRatePoint(
        distance=distance,
        protocol="sps_bb84",
        params=dict(params),
        mean_photon=dist.mean,
        skr=ell / s.N,
        key_length=ell,
        q_total_z=q,
        qber_z=counts.m_z / counts.n_z if counts.n_z > 0 else 0.0,
        qber_x=counts.e_x,
        phase_error=phi,
        raw_key_length=raw,
    )


def evaluate_rate(
    protocol: str, params: dict[str, float], distance: float, cfg: RunConfig
) -> KeyRatePoint:
    """Deterministic key rate; invalid parameter combinations give a zero-rate point."""
    try:
        if protocol == "si":
            return evaluate_si(cfg, params, distance)
        if protocol == "sps_bb84":
            return evaluate_bb84(cfg, params, distance)
    except (InvalidSource, DomainError, NoConvergence) as exc:
        return _zero(protocol, params, distance, f"{type(exc).__name__}: {exc}")
    raise ValueError(f"unknown protocol {protocol!r}")
