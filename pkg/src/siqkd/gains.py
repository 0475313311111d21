"""Analytic coincidence gains and QBER of the source-independent protocol.

Both sources emit at most two photons, so a pulse pair carries 0 to 4
photons in total. :func:`component_gains` gives the correct and error gain
of each of these five sectors for threshold detectors with efficiency
``eta`` (basis choice included) and dark-count probability ``p_d``.
Misalignment ``e_d`` is mixed in only when the sectors are aggregated.

The same expressions serve both bases. Exact enumeration
(:mod:`siqkd.fock`) agrees with them in Z, and for the total gain in X, but
in X it moves part of the sector 2-4 error gain into the correct gain: a
cross-port pair that is anticorrelated in Z is uncorrelated in X. The rate
engine keeps the closed forms, which overstate X errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from siqkd.errors import DomainError
from siqkd.link import LinkParams, basis_efficiencies
from siqkd.sources import PhotonNumberDistribution

SECTORS = (0, 1, 2, 3, 4)

ComponentGainFn = Callable[[int, PhotonNumberDistribution, float, float], "tuple[float, float]"]


@dataclass(frozen=True)
class BasisGain:
    """Gains of one basis: correct, error, total and the observed QBER."""

    correct: float
    error: float
    total: float
    qber: float

    @classmethod
    def aggregate(cls, correct: float, error: float, e_d: float) -> "BasisGain":
        """Total gain and QBER with misalignment ``e_d`` swapping outcomes."""
        total = correct + error
        if total <= 0.0:
            return cls(correct=correct, error=error, total=0.0, qber=0.0)
        qber = (e_d * correct + (1.0 - e_d) * error) / total
        return cls(correct=correct, error=error, total=total, qber=qber)


@dataclass(frozen=True)
class GainTable:
    z: BasisGain
    x: BasisGain

    def __getitem__(self, basis: str) -> BasisGain:
        return {"Z": self.z, "X": self.x}[basis.upper()]


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name}={value!r} outside [0, 1]")


def component_gains(
    n_total: int, dist: PhotonNumberDistribution, eta: float, p_d: float
) -> tuple[float, float]:
    """Correct and error gain of the ``n_total``-photon sector.

    ``eta`` is the per-basis efficiency (basis probability x detector x
    channel). Within-basis double clicks are resolved at random, which is
    where the ``(1 - p_d/2)`` factors come from.
    """
    _check_unit("eta", eta)
    _check_unit("p_d", p_d)
    if n_total not in SECTORS:
        raise DomainError(f"n_total must be in 0..4, got {n_total!r}")
    p0, p1, p2 = dist.probs
    # Sector 3 and 4 error brackets are expanded in delta = 1 - (1 - p_d)^2
    # and eta; the unexpanded form (quoted above each) subtracts O(1) terms
    # to get an O(eta^2) result and loses most digits at small eta.
    delta = p_d * (2.0 - p_d)
    u = 1.0 - eta
    # one party's two detectors: one carries 1 or 2 photons, both carry darks
    one = delta + eta * (1.0 - delta)
    two = delta + eta * (2.0 - eta) * (1.0 - delta)
    dark = p_d * (1.0 - p_d / 2.0)

    if n_total == 0:
        q = 2.0 * p0 * p0 * dark * dark
        return q, q
    if n_total == 1:
        q = 2.0 * p0 * p1 * dark * one
        return q, q
    if n_total == 2:
        correct = 2.0 * p0 * p2 * dark * two + p1 * p1 / 2.0 * one * one
        error = p0 * p2 * one * one + p1 * p1 * dark * two
        return correct, error
    if n_total == 3:
        correct = p1 * p2 * one * two
        # 1 + 2p_d - p_d^2 - k^2 u (2 - eta) + (1 - 4p_d + 2p_d^2) k^2 u^3, k = 1 - p_d
        bracket = (
            eta * eta * (2.0 - eta)
            + delta * eta * (3.0 * u * u + 2.0 * u + 1.0)
            + 2.0 * u**3 * delta * delta
        )
        return correct, p1 * p2 / 2.0 * bracket
    correct = p2 * p2 / 2.0 * two * two
    # 3 + 2p_d - p_d^2 - 2 k^2 u (3 - 3eta + 2eta^2) + (3 - 8p_d + 4p_d^2) k^2 u^4
    bracket = (
        eta * eta * (8.0 - 8.0 * eta + 3.0 * eta * eta)
        + delta * eta * (7.0 * u**3 + 3.0 * u * u + 5.0 * u + 1.0)
        + 4.0 * u**4 * delta * delta
    )
    return correct, p2 * p2 / 8.0 * bracket


def sector_sum(
    dist: PhotonNumberDistribution,
    eta: float,
    p_d: float,
    component_fn: ComponentGainFn = component_gains,
) -> tuple[float, float]:
    """Correct and error gain summed over all five sectors."""
    correct = error = 0.0
    for n in SECTORS:
        c, e = component_fn(n, dist, eta, p_d)
        correct += c
        error += e
    return correct, error


def basis_gains(dist: PhotonNumberDistribution, link: LinkParams) -> GainTable:
    """Per-basis gains and QBER for the given source and link.

    The vacuum sector is included: at long distance its dark-count
    coincidences set the noise floor.
    """
    eff = basis_efficiencies(link)
    z = BasisGain.aggregate(*sector_sum(dist, eff.eta_z, link.p_d), link.e_d)
    x = BasisGain.aggregate(*sector_sum(dist, eff.eta_x, link.p_d), link.e_d)
    return GainTable(z=z, x=x)


def ideal_gains(dist: PhotonNumberDistribution, eta: float) -> tuple[float, float, float, float]:
    """Noise-free gains ``(correct, error, total, qber)`` to leading order in eta.

    ``correct = <n>^2 eta^2 / 2``, ``error = g2 <n>^2 eta^2 / 2`` and
    ``qber = g2 / (1 + g2)``. The full sector sum at ``p_d = e_d = 0`` agrees
    with these up to relative corrections of order ``eta`` whenever ``p2 > 0``.
    """
    base = dist.mean * dist.mean * eta * eta / 2.0
    correct = base
    error = dist.g2 * base
    return correct, error, correct + error, dist.g2 / (1.0 + dist.g2)
