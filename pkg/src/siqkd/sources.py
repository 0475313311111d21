"""Photon-number models of the non-classical sources.

Both source types are reduced to a distribution truncated at two photons,
parametrised by the mean photon number and g2(0). The odd cat state enters
through its closed-form (mean, g2) pair; its full Fock expansion is only used
by :func:`odd_cat_fock_check` to verify those closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from siqkd.errors import CutoffTooSmall, DomainError, InvalidSource

# Below this intensity mu*coth(mu) is evaluated by its Taylor series.
_SERIES_MU = 1e-4


@dataclass(frozen=True)
class PhotonNumberDistribution:
    """Emission probabilities of 0, 1 and 2 photons per pulse.

    Attributes
    ----------
    p0, p1, p2 : float
        Vacuum, single- and two-photon probabilities.
    mean : float
        Mean photon number, ``p1 + 2*p2``.
    g2 : float
        Second-order correlation at zero delay.
    """

    p0: float
    p1: float
    p2: float
    mean: float
    g2: float

    def __post_init__(self) -> None:
        for name in ("p0", "p1", "p2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidSource(f"{name}={value!r} outside [0, 1]")
        if abs(self.p0 + self.p1 + self.p2 - 1.0) > 1e-12:
            raise InvalidSource("probabilities do not sum to 1")

    @property
    def probs(self) -> tuple[float, float, float]:
        return (self.p0, self.p1, self.p2)


@dataclass(frozen=True)
class OddCatParams:
    """Odd cat state (|a> - |-a>) with coherent intensity ``mu = |a|^2``."""

    mu: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise DomainError(f"mu must be positive and finite, got {self.mu!r}")


def sps_distribution(mean: float, g2: float) -> PhotonNumberDistribution:
    """Two-photon-truncated distribution with the given mean and g2(0).

    ``p2 = g2*mean**2/2``, ``p1 = mean - 2*p2`` and ``p0 = 1 - p1 - p2``.
    Raises :class:`InvalidSource` when any of these leaves [0, 1], e.g. a mean
    above one with small g2.
    """
    if not mean > 0:
        raise InvalidSource(f"mean must be positive, got {mean!r}")
    if not g2 >= 0:
        raise InvalidSource(f"g2 must be non-negative, got {g2!r}")
    p2 = g2 * mean * mean / 2.0
    p1 = mean - 2.0 * p2
    p0 = 1.0 - p1 - p2
    # Round-off can leave p0 at -1e-17 in the pure single-photon limit.
    if -1e-15 < p0 < 0.0:
        p0 = 0.0
    for name, value in (("p0", p0), ("p1", p1), ("p2", p2)):
        if not 0.0 <= value <= 1.0:
            raise InvalidSource(
                f"mean={mean!r}, g2={g2!r} gives {name}={value!r} outside [0, 1]"
            )
    return PhotonNumberDistribution(p0=p0, p1=p1, p2=p2, mean=mean, g2=g2)


def odd_cat_g2(mu: float) -> float:
    """g2(0) of the odd cat state, ``tanh(mu)**2``."""
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu!r}")
    return math.tanh(mu) ** 2


def odd_cat_mean(mu: float) -> float:
    """Mean photon number of the odd cat state, ``mu*coth(mu)``."""
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu!r}")
    if mu < _SERIES_MU:
        mu2 = mu * mu
        return 1.0 + mu2 / 3.0 - mu2 * mu2 / 45.0
    return mu / math.tanh(mu)


def odd_cat_distribution(mu: float) -> PhotonNumberDistribution:
    """Truncated distribution carrying the odd cat's mean and g2(0)."""
    return sps_distribution(odd_cat_mean(mu), odd_cat_g2(mu))


def odd_cat_fock_check(mu: float, cutoff: int) -> tuple[float, float]:
    """Mean and g2(0) of the odd cat from its explicit Fock expansion.

    Expands ``(|a> - |-a>) / sqrt(2(1 - exp(-2 mu)))`` with real ``a = sqrt(mu)``
    over photon numbers ``0..cutoff`` and sums ``<n>`` and ``<n(n-1)>``
    directly. This is an independent route to :func:`odd_cat_mean` and
    :func:`odd_cat_g2`.

    Raises
    ------
    CutoffTooSmall
        If the truncated norm is below ``1 - 1e-12``.
    """
    weights = odd_cat_fock_weights(mu, cutoff)
    norm = math.fsum(weights)
    if norm < 1.0 - 1e-12:
        raise CutoffTooSmall(f"norm {norm!r} at cutoff {cutoff} for mu={mu!r}")
    mean = math.fsum(n * w for n, w in enumerate(weights))
    second = math.fsum(n * (n - 1) * w for n, w in enumerate(weights))
    return mean, second / (mean * mean)


def odd_cat_fock_weights(mu: float, cutoff: int) -> list[float]:
    """|<n|psi>|^2 for n = 0..cutoff. Even entries are exactly zero."""
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu!r}")
    alpha = math.sqrt(mu)
    # <n|a> = exp(-mu/2) a^n / sqrt(n!), built recursively to avoid overflow.
    plus = [math.exp(-mu / 2.0)]
    minus = [math.exp(-mu / 2.0)]
    for n in range(1, cutoff + 1):
        plus.append(plus[-1] * alpha / math.sqrt(n))
        minus.append(minus[-1] * -alpha / math.sqrt(n))
    scale = 1.0 / math.sqrt(2.0 * -math.expm1(-2.0 * mu))
    return [((p - m) * scale) ** 2 for p, m in zip(plus, minus)]
