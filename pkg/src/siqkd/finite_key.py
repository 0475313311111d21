"""Finite-size statistics and the key length of the source-independent protocol."""

from __future__ import annotations

import math
from dataclasses import dataclass

from siqkd.errors import DomainError


@dataclass(frozen=True)
class FiniteKeyBudget:
    """Block size and security parameters.

    ``n_pulses`` is the number of emitted pulse pairs N; ``f`` the
    error-correction inefficiency.
    """

    n_pulses: float = 1e12
    f: float = 1.16
    eps_cor: float = 1e-15
    eps_sec: float = 1e-10

    def __post_init__(self) -> None:
        if not self.n_pulses >= 1:
            raise DomainError(f"n_pulses must be >= 1, got {self.n_pulses!r}")
        if not self.f >= 1:
            raise DomainError(f"f must be >= 1, got {self.f!r}")
        for name in ("eps_cor", "eps_sec"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise DomainError(f"{name}={value!r} outside (0, 1)")


@dataclass(frozen=True)
class SiftedCounts:
    """Expected sifted and error counts per basis (real-valued)."""

    n_z: float
    n_x: float
    m_z: float
    m_x: float

    def __post_init__(self) -> None:
        if self.m_z > self.n_z * (1 + 1e-12) or self.m_x > self.n_x * (1 + 1e-12):
            raise DomainError("error count exceeds sifted count")

    @property
    def e_z(self) -> float:
        return self.m_z / self.n_z if self.n_z > 0 else 0.0

    @property
    def e_x(self) -> float:
        return self.m_x / self.n_x if self.n_x > 0 else 0.0


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy argument {x!r} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def chernoff_upper(x_star: float, eps: float) -> float:
    """Upper bound on an observed count whose expectation is ``x_star``.

    ``x* + b/2 + sqrt(2 b x* + b^2/4)`` with ``b = -ln(eps)``.
    """
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps={eps!r} outside (0, 1)")
    if not x_star >= 0:
        raise DomainError(f"x_star must be >= 0, got {x_star!r}")
    beta = -math.log(eps)
    if x_star == 0.0:
        return beta
    return x_star + beta / 2.0 + math.sqrt(2.0 * beta * x_star + beta * beta / 4.0)


def gamma_u(n: float, k: float, lam: float, eps: float) -> float:
    """Random-sampling correction to an error rate ``lam`` observed on ``k`` of ``n + k`` items.

    Raises :class:`DomainError` for ``lam`` at 0 or 1 or when the logarithm's
    argument is at most 1 (the bound is vacuous there).
    """
    if not (n >= 1 and k >= 1):
        raise DomainError(f"sample sizes must be >= 1, got n={n!r}, k={k!r}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda={lam!r} outside (0, 1)")
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps={eps!r} outside (0, 1)")
    total = n + k
    arg = total / (2.0 * math.pi * n * k * lam * (1.0 - lam) * eps * eps)
    if not arg > 1.0:
        raise DomainError(f"log argument {arg!r} <= 1")
    a = max(n, k)
    g = total / (n * k) * math.log(arg)
    ag = a * g / total
    return (
        ((1.0 - 2.0 * lam) * ag + math.sqrt(ag * ag + 4.0 * lam * (1.0 - lam) * g))
        / (2.0 + 2.0 * a * ag / total)
    )


def bounded_error_rate(observed: float, n: float, k: float, zero_rate: float, eps: float) -> float:
    """``min(1/2, observed + gamma_u(n, k, lam, eps))`` with the zero-error fix.

    When no error was observed, ``lam`` is replaced by ``zero_rate``
    (callers pass half an event on the observed sample). Any domain failure
    gives the worst case 1/2.
    """
    if observed >= 0.5:
        return 0.5
    lam = observed if observed > 0.0 else zero_rate
    try:
        return min(0.5, observed + gamma_u(n, k, lam, eps))
    except DomainError:
        return 0.5


def phase_error_si(counts: SiftedCounts, eps_sec: float) -> float:
    """Z-basis phase-error bound from the X-basis error rate, at ``eps_sec/2``."""
    if counts.n_z < 1 or counts.n_x < 1:
        return 0.5
    return bounded_error_rate(
        counts.e_x, counts.n_z, counts.n_x, 0.5 / counts.n_x, eps_sec / 2.0
    )


def key_length_si(counts: SiftedCounts, phi_z: float, budget: FiniteKeyBudget) -> int:
    """Extractable key bits from the Z basis, floored at zero."""
    raw = key_length_si_raw(counts, phi_z, budget)
    return int(math.floor(raw)) if raw > 0 else 0


def key_length_si_raw(counts: SiftedCounts, phi_z: float, budget: FiniteKeyBudget) -> float:
    """Unfloored, unclamped key length (may be negative)."""
    if counts.n_z <= 0:
        return 0.0
    phi = min(max(phi_z, 0.0), 0.5)
    return (
        counts.n_z * (1.0 - binary_entropy(phi))
        - counts.n_z * budget.f * binary_entropy(min(counts.e_z, 1.0))
        - math.log2(2.0 / budget.eps_cor)
        - 2.0 * math.log2(1.0 / budget.eps_sec)
    )
