"""Finite-size key rates for source-independent QKD with non-classical sources.

The package computes secure key rates for a polarization-encoded
source-independent protocol (two independent single-photon-like sources
interfering at a polarizing beam splitter) and for a single-photon BB84
baseline. Analytic detection gains are cross-checked against an exact
Fock-basis enumeration in :mod:`siqkd.fock`.
"""

from siqkd.errors import (
    CutoffTooSmall,
    DomainError,
    InvalidSource,
    ModeMismatch,
    NoConvergence,
    ParseError,
    ValidationError,
)
from siqkd.sources import (
    OddCatParams,
    PhotonNumberDistribution,
    odd_cat_distribution,
    odd_cat_fock_check,
    odd_cat_g2,
    odd_cat_mean,
    sps_distribution,
)
from siqkd.link import EffectiveEfficiency, LinkParams, basis_efficiencies, channel_efficiency
from siqkd.gains import BasisGain, GainTable, basis_gains, component_gains, ideal_gains

__version__ = "0.1.0"

__all__ = [
    "BasisGain",
    "CutoffTooSmall",
    "DomainError",
    "EffectiveEfficiency",
    "GainTable",
    "InvalidSource",
    "LinkParams",
    "ModeMismatch",
    "NoConvergence",
    "OddCatParams",
    "ParseError",
    "PhotonNumberDistribution",
    "ValidationError",
    "basis_efficiencies",
    "basis_gains",
    "channel_efficiency",
    "component_gains",
    "ideal_gains",
    "odd_cat_distribution",
    "odd_cat_fock_check",
    "odd_cat_g2",
    "odd_cat_mean",
    "sps_distribution",
]
