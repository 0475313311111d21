"""Channel, detector and basis-choice parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass

from siqkd.errors import DomainError

ROUTING_MODES = ("active", "passive")


@dataclass(frozen=True)
class LinkParams:
    """Symmetric link with the source midway between Alice and Bob.

    ``total_distance`` is the Alice-Bob fibre length in km; each party sees
    half of it. ``routing='passive'`` marks the single-source variant with a
    passive beam splitter in place of the optical switch, which halves the
    effective number of pulse pairs but leaves the gains untouched.
    """

    alpha_db_per_km: float = 0.16
    total_distance: float = 0.0
    eta_det: float = 0.8
    p_d: float = 1e-7
    e_d: float = 0.01
    p_z: float = 0.5
    routing: str = "active"

    def __post_init__(self) -> None:
        for name in ("eta_det", "p_d", "e_d", "p_z"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name}={value!r} outside [0, 1]")
        if not self.alpha_db_per_km >= 0:
            raise DomainError(f"alpha_db_per_km must be >= 0, got {self.alpha_db_per_km!r}")
        if not self.total_distance >= 0:
            raise DomainError(f"total_distance must be >= 0, got {self.total_distance!r}")
        if self.routing not in ROUTING_MODES:
            raise DomainError(f"routing must be one of {ROUTING_MODES}, got {self.routing!r}")

    @property
    def p_x(self) -> float:
        return 1.0 - self.p_z

    @property
    def count_factor(self) -> float:
        """Fraction of emitted pulse pairs that interfere at the PBS."""
        return 0.5 if self.routing == "passive" else 1.0


@dataclass(frozen=True)
class EffectiveEfficiency:
    eta_cha: float
    eta_z: float
    eta_x: float


def channel_efficiency(params: LinkParams) -> float:
    """Per-side transmittance ``10**(-alpha*l/20)`` for total length ``l``."""
    return 10.0 ** (-params.alpha_db_per_km * params.total_distance / 20.0)


def basis_efficiencies(params: LinkParams) -> EffectiveEfficiency:
    eta_cha = channel_efficiency(params)
    eta = params.eta_det * eta_cha
    return EffectiveEfficiency(
        eta_cha=eta_cha, eta_z=params.p_z * eta, eta_x=(1.0 - params.p_z) * eta
    )


def no_click_probability(n: int, eta: float, p_d: float) -> float:
    """Threshold detector stays silent with ``n`` incident photons."""
    return (1.0 - p_d) * (1.0 - eta) ** n


def click_probability(n: int, eta: float, p_d: float) -> float:
    """``1 - (1 - p_d)(1 - eta)^n`` without cancellation for small ``p_d``, ``eta``."""
    if n == 0 or eta == 0.0:
        return p_d
    if eta >= 1.0:
        return 1.0
    return p_d + (1.0 - p_d) * -math.expm1(n * math.log1p(-eta))
