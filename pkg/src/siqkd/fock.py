"""Exact photon-number enumeration of the source-independent setup.

Every joint emission ``|i>_c |j>_d`` (at most two photons per source) is
propagated as a pure state through the PBS and both parties' basis-choice
beam splitters and polarisation analysers. Linear optics acts by
substituting creation operators, so amplitudes are exact and nothing is
sampled. Channel and detector loss are folded into the threshold-detector
POVM, ``P(no click | n photons) = (1 - p_d)(1 - eta)^n``, which is diagonal in
the occupation basis.

Conventions
-----------
* PBS: H transmits, V reflects, so ``c_H -> a_H``, ``c_V -> b_V``,
  ``d_H -> b_H``, ``d_V -> a_V``. Port ``a`` goes to Alice, ``b`` to Bob.
* Analyser: amplitude ``sqrt(p_z)`` to the Z arm, ``sqrt(1 - p_z)`` to the X
  arm, where ``H -> (+ + -)/sqrt2`` and ``V -> (+ - -)/sqrt2``.
* Statistics of one basis ignore the other basis's detectors. A party with
  no click in the analysed basis contributes no coincidence; a double click
  within it yields a uniformly random bit.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache

from siqkd.errors import DomainError, ModeMismatch
from siqkd.gains import BasisGain, GainTable
from siqkd.link import LinkParams, channel_efficiency, click_probability, no_click_probability
from siqkd.sources import PhotonNumberDistribution

INPUT_MODES = ("c_H", "c_V", "d_H", "d_V")
PBS_MAP = {"c_H": "a_H", "c_V": "b_V", "d_H": "b_H", "d_V": "a_V"}
PARTY_PORT = {"A": "a", "B": "b"}

# bit 0 detector first
BASIS_DETECTORS = {
    "Z": {"A": ("A_Z_H", "A_Z_V"), "B": ("B_Z_H", "B_Z_V")},
    "X": {"A": ("A_X_+", "A_X_-"), "B": ("B_X_+", "B_X_-")},
}

_S2 = 1.0 / math.sqrt(2.0)
_AMP_EPS = 1e-15


@dataclass(frozen=True)
class FockState:
    """Pure state as a map from occupation vectors to amplitudes.

    ``modes[k]`` names the mode whose photon count is entry ``k`` of each
    occupation vector.
    """

    modes: tuple[str, ...]
    amplitudes: dict[tuple[int, ...], complex] = field(default_factory=dict)

    @classmethod
    def vacuum(cls, modes: tuple[str, ...]) -> "FockState":
        return cls(modes, {(0,) * len(modes): 1.0 + 0j})

    def norm(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.amplitudes.values())

    def photon_numbers(self) -> set[int]:
        return {sum(occ) for occ in self.amplitudes}

    def probabilities(self) -> dict[tuple[int, ...], float]:
        return {occ: abs(a) ** 2 for occ, a in self.amplitudes.items()}

    def amplitude(self, **occupation: int) -> complex:
        """Amplitude of the basis state with the given mode counts (others 0)."""
        unknown = set(occupation) - set(self.modes)
        if unknown:
            raise ModeMismatch(sorted(unknown))
        occ = tuple(occupation.get(m, 0) for m in self.modes)
        return self.amplitudes.get(occ, 0j)


def linear_evolve(
    state: FockState,
    mapping: dict[str, list[tuple[str, complex]]],
    out_modes: tuple[str, ...],
) -> FockState:
    """Apply ``a_m^dag -> sum_k c_k b_k^dag`` to every creation operator.

    Modes of ``state`` absent from ``mapping`` are carried over unchanged and
    must appear in ``out_modes``.
    """
    index = {m: k for k, m in enumerate(out_modes)}
    routes = []
    for m in state.modes:
        targets = mapping.get(m, [(m, 1.0)])
        try:
            routes.append([(index[t], c) for t, c in targets])
        except KeyError as exc:
            raise ModeMismatch(f"output mode {exc.args[0]!r} not declared") from None

    out: dict[tuple[int, ...], complex] = defaultdict(complex)
    empty = (0,) * len(out_modes)
    for occ, amp in state.amplitudes.items():
        # |occ> = prod_m (a_m^dag)^{n_m} / sqrt(n_m!) |0>
        terms: dict[tuple[int, ...], complex] = {
            empty: amp / math.sqrt(math.prod(math.factorial(n) for n in occ))
        }
        for m, n in enumerate(occ):
            for _ in range(n):
                expanded: dict[tuple[int, ...], complex] = defaultdict(complex)
                for vec, a in terms.items():
                    for k, c in routes[m]:
                        new = list(vec)
                        new[k] += 1
                        expanded[tuple(new)] += a * c
                terms = expanded
        for vec, a in terms.items():
            # (b^dag)^n |0> = sqrt(n!) |n>
            out[vec] += a * math.sqrt(math.prod(math.factorial(n) for n in vec))
    return FockState(out_modes, {v: a for v, a in out.items() if abs(a) > _AMP_EPS})


def plus_polarized(n_c: int, n_d: int) -> FockState:
    """``n_c`` photons in port c and ``n_d`` in port d, all in |+>."""
    seed = FockState(("c", "d"), {(n_c, n_d): 1.0 + 0j})
    mapping = {"c": [("c_H", _S2), ("c_V", _S2)], "d": [("d_H", _S2), ("d_V", _S2)]}
    return linear_evolve(seed, mapping, INPUT_MODES)


def build_joint_components(
    dist_c: PhotonNumberDistribution, dist_d: PhotonNumberDistribution
) -> list[tuple[float, FockState]]:
    """Weighted pure components ``p_i p_j |i>_c |j>_d`` with nonzero weight."""
    components = []
    for i, j in itertools.product(range(3), repeat=2):
        weight = dist_c.probs[i] * dist_d.probs[j]
        if weight > 0.0:
            components.append((weight, plus_polarized(i, j)))
    return components


def pbs_evolve(state: FockState) -> FockState:
    missing = [m for m in INPUT_MODES if m not in state.modes]
    if missing:
        raise ModeMismatch(f"PBS input modes absent: {missing}")
    out_modes = tuple(PBS_MAP.get(m, m) for m in state.modes)
    return linear_evolve(state, {m: [(PBS_MAP[m], 1.0)] for m in INPUT_MODES}, out_modes)


def party_analyzer_evolve(state: FockState, p_z: float, party: str) -> FockState:
    """Passive basis choice and polarisation analysis for one party."""
    if not 0.0 <= p_z <= 1.0:
        raise DomainError(f"p_z={p_z!r} outside [0, 1]")
    port = PARTY_PORT[party]
    h, v = f"{port}_H", f"{port}_V"
    if h not in state.modes or v not in state.modes:
        raise ModeMismatch(f"party {party} modes {h}, {v} absent")
    zh, zv = BASIS_DETECTORS["Z"][party]
    xp, xm = BASIS_DETECTORS["X"][party]
    sz, sx = math.sqrt(p_z), math.sqrt(1.0 - p_z)
    mapping = {
        h: [(zh, sz), (xp, sx * _S2), (xm, sx * _S2)],
        v: [(zv, sz), (xp, sx * _S2), (xm, -sx * _S2)],
    }
    out_modes: list[str] = []
    for m in state.modes:
        if m == h:
            out_modes += [zh, zv, xp, xm]
        elif m != v:
            out_modes.append(m)
    return linear_evolve(state, mapping, tuple(out_modes))


@dataclass(frozen=True)
class ClickOutcome:
    """Click pattern on a set of detectors."""

    detectors: tuple[str, ...]
    clicks: tuple[bool, ...]

    def clicked(self, detector: str) -> bool:
        return self.clicks[self.detectors.index(detector)]

    def announcement(self, party: str, basis: str) -> dict[int, float]:
        """Bit distribution a party announces in ``basis``; empty if no click.

        A double click within the basis is resolved by a fair coin.
        """
        d0, d1 = BASIS_DETECTORS[basis][party]
        c0, c1 = self.clicked(d0), self.clicked(d1)
        if c0 and c1:
            return {0: 0.5, 1: 0.5}
        if c0:
            return {0: 1.0}
        if c1:
            return {1: 1.0}
        return {}


def click_distribution(
    state: FockState,
    eta: float,
    p_d: float,
    detectors: tuple[str, ...] | None = None,
) -> dict[ClickOutcome, float]:
    """Click-pattern probabilities on ``detectors`` (default: every mode).

    Detectors left out are marginalised, which is exact because each
    detector's click and no-click operators sum to the identity.
    """
    if not (0.0 <= eta <= 1.0 and 0.0 <= p_d <= 1.0):
        raise DomainError(f"eta={eta!r}, p_d={p_d!r} must lie in [0, 1]")
    detectors = state.modes if detectors is None else detectors
    missing = [d for d in detectors if d not in state.modes]
    if missing:
        raise ModeMismatch(f"detectors absent from state: {missing}")
    idx = [state.modes.index(d) for d in detectors]

    marginal: dict[tuple[int, ...], float] = defaultdict(float)
    for occ, prob in state.probabilities().items():
        marginal[tuple(occ[k] for k in idx)] += prob

    out: dict[ClickOutcome, float] = defaultdict(float)
    patterns = list(itertools.product((False, True), repeat=len(detectors)))
    for counts, prob in marginal.items():
        fire = [(click_probability(n, eta, p_d), no_click_probability(n, eta, p_d)) for n in counts]
        for pattern in patterns:
            p = prob
            for (f, nf), c in zip(fire, pattern):
                p *= f if c else nf
            out[ClickOutcome(detectors, pattern)] += p
    return dict(out)


@lru_cache(maxsize=None)
def _analysed_component(n_c: int, n_d: int, p_z: float) -> FockState:
    state = pbs_evolve(plus_polarized(n_c, n_d))
    state = party_analyzer_evolve(state, p_z, "A")
    return party_analyzer_evolve(state, p_z, "B")


def coincidence_gains(
    state: FockState, basis: str, eta: float, p_d: float
) -> tuple[float, float]:
    """Correct and error coincidence probability of one pure component."""
    detectors = BASIS_DETECTORS[basis]["A"] + BASIS_DETECTORS[basis]["B"]
    correct = error = 0.0
    for outcome, prob in click_distribution(state, eta, p_d, detectors).items():
        alice = outcome.announcement("A", basis)
        bob = outcome.announcement("B", basis)
        for a, pa in alice.items():
            for b, pb in bob.items():
                if a == b:
                    correct += prob * pa * pb
                else:
                    error += prob * pa * pb
    return correct, error


def oracle_sector_gains(
    n_total: int,
    dist: PhotonNumberDistribution,
    p_z: float,
    eta: float,
    p_d: float,
) -> dict[str, tuple[float, float]]:
    """Correct and error gains of one total-photon-number sector, both bases.

    ``eta`` is the detector-plus-channel efficiency; the basis probability is
    consumed by the analyser, so basis Z effectively sees ``p_z * eta``.
    """
    result = {"Z": (0.0, 0.0), "X": (0.0, 0.0)}
    for i in range(3):
        j = n_total - i
        if not 0 <= j <= 2:
            continue
        weight = dist.probs[i] * dist.probs[j]
        if weight == 0.0:
            continue
        state = _analysed_component(i, j, p_z)
        for basis in ("Z", "X"):
            c, e = coincidence_gains(state, basis, eta, p_d)
            c0, e0 = result[basis]
            result[basis] = (c0 + weight * c, e0 + weight * e)
    return result


def oracle_basis_gains(dist: PhotonNumberDistribution, link: LinkParams) -> GainTable:
    """Gain table from exact enumeration, comparable to :func:`siqkd.gains.basis_gains`."""
    eta = link.eta_det * channel_efficiency(link)
    totals = {"Z": [0.0, 0.0], "X": [0.0, 0.0]}
    for n in range(5):
        for basis, (c, e) in oracle_sector_gains(n, dist, link.p_z, eta, link.p_d).items():
            totals[basis][0] += c
            totals[basis][1] += e
    return GainTable(
        z=BasisGain.aggregate(*totals["Z"], link.e_d),
        x=BasisGain.aggregate(*totals["X"], link.e_d),
    )
