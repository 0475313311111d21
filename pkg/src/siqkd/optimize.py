"""Per-distance maximisation of the key rate and distance sweeps.

A coarse grid over the free variables seeds a bounded Nelder-Mead
refinement. Grid cells are visited in ascending lexicographic order and
only a strictly better cell replaces the incumbent, so ties resolve to the
smallest photon-number variable, then the smallest ``p_z``. Refinement can
only replace the grid seed with a strictly better point.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.optimize import minimize

from siqkd.config import RunConfig
from siqkd.rates import KeyRatePoint, evaluate_rate

MEAN_BOUNDS = (0.01, 1.0)
MU_BOUNDS = (0.01, 1.0)
BASIS_BOUNDS = (0.05, 0.95)
ATT_BOUNDS = (0.01, 1.0)


@dataclass(frozen=True)
class Variable:
    name: str
    lo: float
    hi: float


@dataclass(frozen=True)
class OptimizationSpec:
    """Free variables, grid resolution and refinement budget for one protocol.

    Variables are ordered by tie-break priority. ``fixed`` holds protocol
    variables that are not optimised.
    """

    protocol: str
    variables: tuple[Variable, ...]
    grid: int
    refine_iters: int = 200
    rel_tol: float = 1e-6
    fixed: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        if self.grid < 2:
            raise ValueError("grid resolution must be >= 2")
        for v in self.variables:
            if not v.lo <= v.hi:
                raise ValueError(f"empty bounds for {v.name}")

    def params(self, x) -> dict[str, float]:
        out = dict(self.fixed)
        out.update({v.name: float(val) for v, val in zip(self.variables, x)})
        return out


def spec_for(cfg: RunConfig, protocol: str | None = None) -> OptimizationSpec:
    """Optimisation set-up implied by a run configuration."""
    protocol = protocol or cfg.protocol.name
    src = cfg.source
    variables: list[Variable] = []
    fixed: list[tuple[str, float]] = []
    if src.type == "odd_cat":
        if src.mu is None:
            variables.append(Variable("mu", *MU_BOUNDS))
        else:
            fixed.append(("mu", src.mu))
    elif src.mean is None:
        variables.append(Variable("mean", *MEAN_BOUNDS))
    else:
        fixed.append(("mean", src.mean))
    variables.append(Variable("p_z", *BASIS_BOUNDS))
    if protocol == "sps_bb84":
        variables += [Variable("eta_att", *ATT_BOUNDS), Variable("q_z", *BASIS_BOUNDS)]
        grid = cfg.optimizer.bb84_grid
    else:
        grid = cfg.optimizer.si_grid
    return OptimizationSpec(
        protocol=protocol,
        variables=tuple(variables),
        grid=grid,
        refine_iters=cfg.optimizer.refine_iters,
        rel_tol=cfg.optimizer.rel_tol,
        fixed=tuple(fixed),
    )


def grid_search(spec: OptimizationSpec, distance: float, cfg: RunConfig) -> tuple[KeyRatePoint, list[float]]:
    """Best grid cell and the skr of every cell, in visiting order."""
    axes = [np.linspace(v.lo, v.hi, spec.grid) for v in spec.variables]
    best: KeyRatePoint | None = None
    rates: list[float] = []
    for cell in itertools.product(*axes):
        point = evaluate_rate(spec.protocol, spec.params(cell), distance, cfg)
        rates.append(point.skr)
        if best is None or point.skr > best.skr:
            best = point
    if best is None:  # no free variables
        best = evaluate_rate(spec.protocol, spec.params(()), distance, cfg)
        rates.append(best.skr)
    return best, rates


def _to_box(spec: OptimizationSpec, y: np.ndarray) -> np.ndarray:
    lo = np.array([v.lo for v in spec.variables])
    hi = np.array([v.hi for v in spec.variables])
    return lo + (hi - lo) * (1.0 + np.sin(y)) / 2.0


def _from_box(spec: OptimizationSpec, x: np.ndarray) -> np.ndarray:
    out = np.zeros(len(spec.variables))
    for k, v in enumerate(spec.variables):
        if v.hi > v.lo:
            out[k] = math.asin(min(1.0, max(-1.0, 2.0 * (x[k] - v.lo) / (v.hi - v.lo) - 1.0)))
    return out


def _initial_simplex(spec: OptimizationSpec, y0: np.ndarray) -> np.ndarray:
    # from a bound, a step of this size moves one grid spacing into the box
    step = math.acos(1.0 - 2.0 / (spec.grid - 1))
    simplex = [y0.copy()]
    for k in range(len(spec.variables)):
        vertex = y0.copy()
        vertex[k] += step if y0[k] <= 0.0 else -step
        simplex.append(vertex)
    return np.array(simplex)


def refine(spec: OptimizationSpec, seed: KeyRatePoint, distance: float, cfg: RunConfig) -> KeyRatePoint:
    """Nelder-Mead climb on the unfloored key length from a grid seed.

    The simplex lives in unbounded coordinates ``y`` with
    ``x = lo + (hi - lo)(1 + sin y)/2``, so every vertex is feasible and a
    seed on a bound does not collapse the simplex onto that face.
    """
    if not spec.variables or spec.refine_iters == 0:
        return seed
    x0 = np.array([seed.params[v.name] for v in spec.variables], dtype=float)
    y0 = _from_box(spec, x0)

    def objective(y: np.ndarray) -> float:
        point = evaluate_rate(spec.protocol, spec.params(_to_box(spec, y)), distance, cfg)
        if point.diagnostic is not None:
            return math.inf
        return -point.raw_key_length / cfg.system.N

    fatol = spec.rel_tol * abs(seed.raw_key_length) / cfg.system.N
    result = minimize(
        objective,
        y0,
        method="Nelder-Mead",
        options={
            "maxiter": spec.refine_iters,
            "initial_simplex": _initial_simplex(spec, y0),
            "xatol": 1e-6,
            "fatol": fatol,
            "adaptive": False,
        },
    )
    candidate = evaluate_rate(spec.protocol, spec.params(_to_box(spec, result.x)), distance, cfg)
    return candidate if candidate.skr > seed.skr else seed


def optimize_point(spec: OptimizationSpec, distance: float, cfg: RunConfig) -> KeyRatePoint:
    seed, _ = grid_search(spec, distance, cfg)
    if seed.skr <= 0.0:
        return seed
    return refine(spec, seed, distance, cfg)


def sweep(
    spec: OptimizationSpec, distances: list[float], cfg: RunConfig, jobs: int = 1
) -> list[KeyRatePoint]:
    """Independent optimisation at each distance, returned in input order."""
    work = partial(optimize_point, spec, cfg=cfg)
    if jobs <= 1 or len(distances) <= 1:
        return [work(d) for d in distances]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(work, distances))
