"""Self-checks of the analytic model against independent routes."""

from __future__ import annotations

import math
from dataclasses import dataclass

from siqkd.finite_key import (
    FiniteKeyBudget,
    SiftedCounts,
    binary_entropy,
    chernoff_upper,
    gamma_u,
    key_length_si,
)
from siqkd.fock import oracle_sector_gains
from siqkd.gains import SECTORS, ComponentGainFn, component_gains, ideal_gains, sector_sum
from siqkd.sources import odd_cat_fock_check, odd_cat_fock_weights, odd_cat_g2, odd_cat_mean, sps_distribution

ETA_GRID = (1e-3, 0.004, 0.1, 0.5)
PD_GRID = (0.0, 1e-7, 1e-5, 1e-3)
# (mean, g2) of the sources used in the oracle comparison
SOURCE_GRID = ((1.0, 0.01), (0.5, 0.05), (1.1, 0.4 / 1.21))
REL_TOL = 1e-9
ABS_FLOOR = 1e-18
CAT_MUS = (0.05, 0.1, 0.25, 0.5, 1.0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    max_deviation: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name:<40s} max_dev={self.max_deviation:.3e}"
        return f"{text}  {self.detail}" if self.detail else text


@dataclass(frozen=True)
class Mismatch:
    basis: str
    sector: int
    quantity: str
    eta: float
    p_d: float
    mean: float
    g2: float
    analytic: float
    oracle: float

    def describe(self) -> str:
        return (
            f"first failure: basis {self.basis} sector {self.sector} {self.quantity} "
            f"at eta={self.eta:g}, p_d={self.p_d:g}, mean={self.mean:g}, g2={self.g2:.4g}: "
            f"analytic={self.analytic:.6e} oracle={self.oracle:.6e}"
        )


def _rel(a: float, b: float) -> float:
    diff = abs(a - b)
    if diff <= ABS_FLOOR:
        return 0.0
    return diff / abs(b) if b != 0 else math.inf


def oracle_comparison(
    basis: str,
    component_fn: ComponentGainFn = component_gains,
    totals_only: bool = False,
) -> tuple[float, list[Mismatch]]:
    """Largest relative deviation and all mismatches on the sector grid.

    The oracle splits the basis choice at ``p_z = 1/2`` with detector
    efficiency ``2*eta``, so both bases see efficiency ``eta``.
    """
    worst = 0.0
    failures: list[Mismatch] = []
    for mean, g2 in SOURCE_GRID:
        dist = sps_distribution(mean, g2)
        for eta in ETA_GRID:
            for p_d in PD_GRID:
                for n in SECTORS:
                    ac, ae = component_fn(n, dist, eta, p_d)
                    oc, oe = oracle_sector_gains(n, dist, 0.5, 2.0 * eta, p_d)[basis]
                    pairs = [("total", ac + ae, oc + oe)] if totals_only else [
                        ("correct", ac, oc), ("error", ae, oe)
                    ]
                    for quantity, a, o in pairs:
                        dev = _rel(a, o)
                        worst = max(worst, dev)
                        if abs(a - o) > max(REL_TOL * abs(o), ABS_FLOOR):
                            failures.append(Mismatch(basis, n, quantity, eta, p_d, mean, g2, a, o))
    return worst, failures


def minimal_failure(failures: list[Mismatch]) -> Mismatch | None:
    """Lowest sector, then smallest p_d, then smallest eta."""
    if not failures:
        return None
    return min(failures, key=lambda m: (m.sector, m.p_d, m.eta, m.mean))


def _oracle_check(name: str, basis: str, component_fn: ComponentGainFn, totals_only: bool = False) -> Check:
    worst, failures = oracle_comparison(basis, component_fn, totals_only)
    first = minimal_failure(failures)
    if first is None:
        return Check(name, True, worst)
    sectors = sorted({m.sector for m in failures})
    detail = f"failing sectors {sectors}; {first.describe()}"
    return Check(name, False, worst, detail)


def ideal_limit_exact_check() -> Check:
    """Without two-photon emission the ideal closed forms are exact."""
    worst = 0.0
    for mean in (0.1, 0.5, 1.0):
        dist = sps_distribution(mean, 0.0)
        for eta in ETA_GRID:
            c, e = sector_sum(dist, eta, 0.0)
            ic, ie, it, iq = ideal_gains(dist, eta)
            worst = max(worst, _rel(c, ic), abs(e - ie), _rel(c + e, it), abs(e / (c + e) - iq))
    return Check("ideal limit, g2 = 0", worst <= 1e-12, worst)


def ideal_limit_first_order_check() -> Check:
    """With two-photon emission the closed forms hold to first order in eta."""
    worst = 0.0
    ok = True
    for mean in (0.1, 0.5, 1.0):
        for g2 in (0.01, 0.05):
            dist = sps_distribution(mean, g2)
            for eta in (1e-2, 1e-3, 1e-4, 1e-5):
                c, e = sector_sum(dist, eta, 0.0)
                ic, ie, it, iq = ideal_gains(dist, eta)
                devs = [_rel(c, ic), _rel(e, ie), _rel(c + e, it), _rel(e / (c + e), iq)]
                scaled = max(devs) / eta
                worst = max(worst, scaled)
                ok = ok and scaled <= 1.0
    return Check("ideal limit, deviation / eta (g2 > 0)", ok, worst, "bound 1")


def cat_state_check() -> Check:
    worst = 0.0
    even = 0.0
    for mu in CAT_MUS:
        mean, g2 = odd_cat_fock_check(mu, 40)
        worst = max(worst, _rel(mean, odd_cat_mean(mu)), _rel(g2, odd_cat_g2(mu)))
        weights = odd_cat_fock_weights(mu, 40)
        even = max(even, max(weights[0::2]))
    return Check(
        "odd cat Fock expansion", worst <= REL_TOL and even <= 1e-12, worst,
        f"max even-component weight {even:.1e}",
    )


def statistics_check() -> Check:
    problems = []
    for eps in (1e-10, 1e-3, 0.5):
        if chernoff_upper(0.0, eps) != -math.log(eps):
            problems.append(f"chernoff_upper(0, {eps:g})")
    if binary_entropy(0.0) != 0.0 or binary_entropy(1.0) != 0.0 or binary_entropy(0.5) != 1.0:
        problems.append("binary entropy anchors")
    ell = key_length_si(
        SiftedCounts(n_z=1e6, n_x=1e6, m_z=0.0, m_x=0.0), 0.0,
        FiniteKeyBudget(n_pulses=1e12, eps_cor=1e-15, eps_sec=1e-10),
    )
    if ell != 999882:
        problems.append(f"zero-noise key length {ell} != 999882")
    sizes = (1e3, 1e4, 1e5, 1e6, 1e7)
    for lam in (0.01, 0.05, 0.2):
        series = [gamma_u(n, n, lam, 1e-10) for n in sizes]
        if min(series) <= 0 or any(b >= a for a, b in zip(series, series[1:])):
            problems.append(f"gamma_u positivity/monotonicity at lambda={lam}")
    return Check("finite-size statistics", not problems, 0.0, "; ".join(problems))


def run_verify(component_fn: ComponentGainFn = component_gains) -> list[Check]:
    """Run every check; ``component_fn`` lets tests inject a perturbed model."""
    return [
        _oracle_check("oracle equivalence, basis Z", "Z", component_fn),
        _oracle_check("oracle equivalence, basis X", "X", component_fn),
        _oracle_check("oracle total gain, basis X", "X", component_fn, totals_only=True),
        ideal_limit_exact_check(),
        ideal_limit_first_order_check(),
        cat_state_check(),
        statistics_check(),
    ]


def format_report(checks: list[Check]) -> str:
    lines = [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"
