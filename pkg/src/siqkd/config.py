"""Run configuration: INI-style sections with simulation defaults.

Every key has a default, so an empty file is a valid configuration::

    [system]
    eta_det = 0.8
    p_d = 1e-7          # dark count probability per gate
    [source]
    type = sps
    g2 = 0.01
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any

from siqkd.errors import ParseError, ValidationError

SOURCE_TYPES = ("sps", "odd_cat")
PROTOCOLS = ("si", "sps_bb84")
ROUTINGS = ("active", "passive")


@dataclass(frozen=True)
class SystemSection:
    eta_det: float = 0.8
    p_d: float = 1e-7
    e_d: float = 0.01
    alpha_db_per_km: float = 0.16
    f: float = 1.16
    eps_cor: float = 1e-15
    eps_sec: float = 1e-10
    N: float = 1e12


@dataclass(frozen=True)
class SourceSection:
    """``mean`` (sps) or ``mu`` (odd_cat) left unset means it is optimised."""

    type: str = "sps"
    g2: float | None = 0.01
    mean: float | None = None
    mu: float | None = None


@dataclass(frozen=True)
class ProtocolSection:
    name: str = "si"
    routing: str = "active"
    rep_rate: float = 0.0
    dead_time: float = 0.0


@dataclass(frozen=True)
class SweepSection:
    d_min: float = 0.0
    d_max: float = 450.0
    d_step: float = 10.0

    def distances(self) -> list[float]:
        count = int(math.floor((self.d_max - self.d_min) / self.d_step + 1e-9)) + 1
        return [self.d_min + k * self.d_step for k in range(count)]


@dataclass(frozen=True)
class OptimizerSection:
    si_grid: int = 40
    bb84_grid: int = 12
    refine_iters: int = 200
    rel_tol: float = 1e-6


@dataclass(frozen=True)
class RunConfig:
    system: SystemSection = field(default_factory=SystemSection)
    source: SourceSection = field(default_factory=SourceSection)
    protocol: ProtocolSection = field(default_factory=ProtocolSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    optimizer: OptimizerSection = field(default_factory=OptimizerSection)

    def __post_init__(self) -> None:
        validate(self)

    def replace(self, section: str, **changes: Any) -> "RunConfig":
        """Copy with fields of one section changed, re-validated."""
        updated = dataclasses.replace(getattr(self, section), **changes)
        return dataclasses.replace(self, **{section: updated})


SECTIONS = {
    "system": SystemSection,
    "source": SourceSection,
    "protocol": ProtocolSection,
    "sweep": SweepSection,
    "optimizer": OptimizerSection,
}


def _convert(section: str, key: str, raw: str, default: Any) -> Any:
    text = raw.strip()
    where = f"[{section}] {key}"
    if isinstance(default, str):
        return text
    if isinstance(default, int):
        try:
            return int(text)
        except ValueError:
            raise ParseError(f"{where}: expected an integer, got {raw!r}") from None
    if text.lower() in ("", "none", "auto"):
        return None
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{where}: expected a number, got {raw!r}") from None


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text.

    Raises
    ------
    ParseError
        Malformed syntax, unknown sections or values that are not numbers.
    ValidationError
        Unknown keys or values outside their allowed range.
    """
    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#",),
        comment_prefixes=("#", ";"),
        interpolation=None,
        default_section="__defaults__",
    )
    parser.optionxform = str  # keys are case-sensitive
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc)) from None

    sections: dict[str, Any] = {}
    for name in parser.sections():
        if name not in SECTIONS:
            raise ParseError(f"unknown section [{name}]")
        cls = SECTIONS[name]
        defaults = cls()
        known = {f.name for f in dataclasses.fields(cls)}
        values = {}
        for key, raw in parser.items(name):
            if key not in known:
                raise ValidationError(f"[{name}] unknown key {key!r}")
            values[key] = _convert(name, key, raw, getattr(defaults, key))
        if name == "source" and values.get("type", defaults.type) == "odd_cat":
            values.setdefault("g2", None)
        sections[name] = cls(**values)
    return RunConfig(**sections)


def _unit(where: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{where}={value!r} must lie in [0, 1]")


def validate(cfg: RunConfig) -> None:
    s = cfg.system
    for key in ("eta_det", "p_d", "e_d"):
        _unit(f"system.{key}", getattr(s, key))
    if not s.alpha_db_per_km >= 0:
        raise ValidationError(f"system.alpha_db_per_km={s.alpha_db_per_km!r} must be >= 0")
    if not s.f >= 1:
        raise ValidationError(f"system.f={s.f!r} must be >= 1")
    for key in ("eps_cor", "eps_sec"):
        value = getattr(s, key)
        if not 0.0 < value < 1.0:
            raise ValidationError(f"system.{key}={value!r} must lie in (0, 1)")
    if not s.N >= 1:
        raise ValidationError(f"system.N={s.N!r} must be >= 1")

    src = cfg.source
    if src.type not in SOURCE_TYPES:
        raise ValidationError(f"source.type={src.type!r} must be one of {SOURCE_TYPES}")
    if src.type == "sps":
        if src.g2 is None or not src.g2 >= 0:
            raise ValidationError(f"source.g2={src.g2!r} must be >= 0 for an sps source")
        if src.mu is not None:
            raise ValidationError("source.mu applies only to odd_cat sources")
        if src.mean is not None and not src.mean > 0:
            raise ValidationError(f"source.mean={src.mean!r} must be > 0")
    else:
        if src.g2 is not None or src.mean is not None:
            raise ValidationError("odd_cat sources are set by mu alone; drop g2/mean")
        if src.mu is not None and not (src.mu > 0 and math.isfinite(src.mu)):
            raise ValidationError(f"source.mu={src.mu!r} must be > 0")

    p = cfg.protocol
    if p.name not in PROTOCOLS:
        raise ValidationError(f"protocol.name={p.name!r} must be one of {PROTOCOLS}")
    if p.routing not in ROUTINGS:
        raise ValidationError(f"protocol.routing={p.routing!r} must be one of {ROUTINGS}")
    if not (p.rep_rate >= 0 and p.dead_time >= 0):
        raise ValidationError("protocol.rep_rate and protocol.dead_time must be >= 0")

    w = cfg.sweep
    if not (w.d_min >= 0 and w.d_max >= w.d_min and w.d_step > 0):
        raise ValidationError("sweep requires 0 <= d_min <= d_max and d_step > 0")

    o = cfg.optimizer
    if o.si_grid < 2 or o.bb84_grid < 2:
        raise ValidationError("optimizer grid resolution must be >= 2")
    if o.refine_iters < 0:
        raise ValidationError("optimizer.refine_iters must be >= 0")
    if not o.rel_tol > 0:
        raise ValidationError("optimizer.rel_tol must be > 0")
