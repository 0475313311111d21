"""CSV serialisation of key-rate curves.

Floats are written with 17 significant digits so that reading a file back
and writing it again reproduces it byte for byte. Columns that do not apply
to a row are left empty.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable

from siqkd.rates import KeyRatePoint

HEADER = (
    "distance_km",
    "protocol",
    "mean_photon",
    "p_z",
    "eta_att",
    "q_z",
    "q_total_z",
    "qber_z",
    "qber_x",
    "phase_error_z",
    "key_length_bits",
    "skr_per_pulse",
)
INT_COLUMNS = {"key_length_bits"}
STR_COLUMNS = {"protocol"}

Row = dict[str, "float | int | str | None"]


def point_row(point: KeyRatePoint) -> Row:
    params = point.params
    baseline = point.protocol == "sps_bb84"
    return {
        "distance_km": point.distance,
        "protocol": point.protocol,
        "mean_photon": None if math.isnan(point.mean_photon) else point.mean_photon,
        "p_z": params.get("p_z"),
        "eta_att": params.get("eta_att") if baseline else None,
        "q_z": params.get("q_z") if baseline else None,
        "q_total_z": point.q_total_z,
        "qber_z": point.qber_z,
        "qber_x": point.qber_x,
        "phase_error_z": point.phase_error,
        "key_length_bits": point.key_length,
        "skr_per_pulse": point.skr,
    }


def _cell(column: str, value) -> str:
    if value is None:
        return ""
    if column in STR_COLUMNS:
        return str(value)
    if column in INT_COLUMNS:
        return str(int(value))
    return format(float(value), ".17g")


def write_rows(rows: Iterable[Row]) -> str:
    lines = [",".join(HEADER)]
    for row in rows:
        lines.append(",".join(_cell(c, row.get(c)) for c in HEADER))
    return "\n".join(lines) + "\n"


def write_points(points: Iterable[KeyRatePoint]) -> str:
    return write_rows(point_row(p) for p in points)


def _parse_cell(column: str, text: str):
    if text == "":
        return None
    if column in STR_COLUMNS:
        return text
    if column in INT_COLUMNS:
        return int(text)
    return float(text)


def read_rows(text: str) -> list[Row]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    return [{c: _parse_cell(c, v) for c, v in zip(HEADER, rec)} for rec in reader if rec]


def read_overlay(text: str, label: str = "wcs_overlay") -> list[Row]:
    """Externally supplied curve with ``distance_km`` and ``skr_per_pulse`` columns.

    A ``protocol`` column, when present, overrides ``label``.
    """
    reader = csv.DictReader(io.StringIO(text))
    fields = reader.fieldnames or []
    if "distance_km" not in fields or "skr_per_pulse" not in fields:
        raise ValueError("overlay CSV needs distance_km and skr_per_pulse columns")
    rows = []
    for rec in reader:
        rows.append(
            {
                "distance_km": float(rec["distance_km"]),
                "protocol": rec.get("protocol") or label,
                "skr_per_pulse": float(rec["skr_per_pulse"]),
            }
        )
    return rows
