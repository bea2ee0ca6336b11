"""Deterministic sensor-array response models.

The workhorse is a pair of metal-oxide gas sensors whose conductance
follows a two-gas power law G(c1, c2) = a1*c1^b1 + a2*c2^b2 +
a3*c1^b1*c2^b2 + a4; identity and general linear arrays are available for
testing and for configurations with other dimensions.

Molecule index convention: component 0 is ammonia (first feasible-box
interval), component 1 is ethanol.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import DimensionMismatch, DomainError, InvalidSpec, ParseError

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib


@dataclass(frozen=True, eq=False)
class MosCoefficients:
    """Power-law coefficients of one sensor: a = [a1..a4], b = [b1, b2]."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=np.float64).copy()
        b = np.asarray(self.b, dtype=np.float64).copy()
        if a.shape != (4,):
            raise DimensionMismatch(f"a must have 4 entries, got shape {a.shape}")
        if b.shape != (2,):
            raise DimensionMismatch(f"b must have 2 entries, got shape {b.shape}")
        if not np.all(np.isfinite(a)) or not np.all(np.isfinite(b)):
            raise InvalidSpec("sensor coefficients must be finite")
        if b[0] <= 0 or b[1] <= 0:
            raise InvalidSpec("power-law exponents must be positive")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True, eq=False)
class MosPair:
    """Two-sensor array over two molecule types (S = R = 2)."""

    s1: MosCoefficients
    s2: MosCoefficients


@dataclass(frozen=True, eq=False)
class LinearArray:
    """z = A @ y for an arbitrary finite R x S matrix A."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.float64).copy()
        if m.ndim != 2:
            raise DimensionMismatch(f"matrix must be 2-D, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidSpec("linear array matrix must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class IdentityArray:
    """z = y; the transparent test sensor."""


SensorArrayModel = Union[MosPair, LinearArray, IdentityArray]


def mos_response(c1: float, c2: float, k: MosCoefficients) -> float:
    """Conductance of one sensor at concentrations (c1, c2), both >= 0."""
    if c1 < 0 or c2 < 0:
        raise DomainError(f"concentrations must be non-negative, got ({c1}, {c2})")
    p1 = float(c1) ** k.b[0]
    p2 = float(c2) ** k.b[1]
    return float(k.a[0] * p1 + k.a[1] * p2 + k.a[2] * p1 * p2 + k.a[3])


def array_response(y, m: SensorArrayModel) -> np.ndarray:
    """Sensor-array output f(y) for a single concentration vector."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if isinstance(m, IdentityArray):
        return y.copy()
    if isinstance(m, LinearArray):
        if y.size != m.matrix.shape[1]:
            raise DimensionMismatch(
                f"input has dimension {y.size}, matrix expects {m.matrix.shape[1]}"
            )
        return m.matrix @ y
    if y.size != 2:
        raise DimensionMismatch(f"MOS pair expects 2 concentrations, got {y.size}")
    return np.array(
        [mos_response(y[0], y[1], m.s1), mos_response(y[0], y[1], m.s2)]
    )


def response_dim(m: SensorArrayModel, s: int) -> int:
    """Number of sensor outputs R for input dimension S."""
    if isinstance(m, IdentityArray):
        return s
    if isinstance(m, LinearArray):
        if m.matrix.shape[1] != s:
            raise DimensionMismatch(
                f"linear array expects {m.matrix.shape[1]} inputs, system has {s}"
            )
        return m.matrix.shape[0]
    if s != 2:
        raise DimensionMismatch(f"MOS pair requires S = 2, system has {s}")
    return 2


# Fitted coefficients for the TGS800/TGS826 pair responding to
# ammonia (component 0) and ethanol (component 1).  Kept as the printed
# decimal strings so preset files serialize them verbatim.
_TABLE1_STRINGS = (
    (("2.02e-13", "6.46e-6", "1.61e-14", "7.43e-7"), ("2.54", "4.67e-1")),
    (("2.16e-7", "2.65e-6", "-2.11e-9", "7.77e-6"), ("7.32e-1", "5.122e-1")),
)

TGS_PRESET_NAME = "tgs800-tgs826-table1"


def sensor_preset(name: str) -> MosPair:
    """Built-in named sensor preset."""
    if name != TGS_PRESET_NAME:
        raise InvalidSpec(f"unknown sensor preset {name!r}")
    sensors = [
        MosCoefficients(
            a=[float(v) for v in astr], b=[float(v) for v in bstr]
        )
        for astr, bstr in _TABLE1_STRINGS
    ]
    return MosPair(s1=sensors[0], s2=sensors[1])


def _coeff_string(value: float, candidates: tuple[str, ...]) -> str:
    for cand in candidates:
        if float(cand) == value:
            return cand
    return repr(value)


def serialize_sensor_model(m: MosPair) -> str:
    """Preset-file text for a MOS pair.

    Coefficients matching the built-in preset are written with its exact
    decimal strings; anything else uses full-precision repr.
    """
    lines = []
    for coeffs, (astr, bstr) in zip((m.s1, m.s2), _TABLE1_STRINGS):
        lines.append("[[sensors]]")
        a_text = ", ".join(
            _coeff_string(v, (astr[i],)) for i, v in enumerate(coeffs.a)
        )
        b_text = ", ".join(
            _coeff_string(v, (bstr[i],)) for i, v in enumerate(coeffs.b)
        )
        lines.append(f"a = [{a_text}]")
        lines.append(f"b = [{b_text}]")
        lines.append("")
    return "\n".join(lines)


def save_sensor_file(path, m: MosPair) -> None:
    Path(path).write_text(serialize_sensor_model(m))


def load_sensor_file(path) -> MosPair:
    """Parse a sensor preset file into a two-sensor array."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    extra = set(data) - {"sensors"}
    if extra:
        raise ParseError(f"{path}: unknown keys {sorted(extra)}")
    sensors = data.get("sensors")
    if not isinstance(sensors, list) or len(sensors) != 2:
        raise ParseError(f"{path}: expected exactly 2 [[sensors]] entries")
    parsed = []
    for idx, entry in enumerate(sensors):
        extra = set(entry) - {"a", "b"}
        if extra:
            raise ParseError(f"{path}: sensors[{idx}] has unknown keys {sorted(extra)}")
        if "a" not in entry or "b" not in entry:
            raise ParseError(f"{path}: sensors[{idx}] needs keys 'a' and 'b'")
        parsed.append(MosCoefficients(a=entry["a"], b=entry["b"]))
    return MosPair(s1=parsed[0], s2=parsed[1])
