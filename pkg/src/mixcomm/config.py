"""Experiment configuration: TOML ingestion with scenario defaults.

A config names a scenario ("SIN": all noise additive Gaussian; "SDCN":
sqrt-scaled channel noise) and may override any system parameter.
Unspecified keys fall back to the default simulation parameters for the
chosen scenario; unknown keys are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpec, MissingScenario, ParseError, UnknownKey
from .sensors import TGS_PRESET_NAME, load_sensor_file, sensor_preset
from .system import (
    ChannelMatrix,
    FeasibleBox,
    GaussianNoise,
    NoiseSpec,
    SqrtChannelNoise,
    SystemDescription,
)

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

SCENARIOS = ("SIN", "SDCN")

# Default simulation parameters, by scenario where they differ.
DEFAULT_H_DIAG = (0.01, 0.01)
DEFAULT_TX_COV = {"SIN": 1e6, "SDCN": 1e2}
DEFAULT_CH_COV_SIN = 1.0
DEFAULT_RX_COV = {"SIN": 1e-12, "SDCN": 0.5e-12}
DEFAULT_FEASIBLE_LO = (20e3, 15e3)
DEFAULT_FEASIBLE_HI = (10e4, 50e3)
DEFAULT_CANDIDATE_SET_SIZE = 200
DEFAULT_CSK_AMMONIA = 72e3


@dataclass(frozen=True)
class AlphabetSpec:
    mode: str = "designed"          # designed | csk | random | file
    n: int = 8
    metric: str = "snr"             # l2 | snr | pep (designed mode)
    domain: str = "sod"             # sod | sid (designed mode)
    file: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("designed", "csk", "random", "file"):
            raise InvalidSpec(f"unknown alphabet mode {self.mode!r}")
        if self.mode != "file" and self.n < 1:
            raise InvalidSpec("alphabet size must be >= 1")
        if self.metric not in ("l2", "snr", "pep"):
            raise InvalidSpec(f"unknown alphabet metric {self.metric!r}")
        if self.domain not in ("sod", "sid"):
            raise InvalidSpec(f"unknown alphabet domain {self.domain!r}")
        if self.mode == "file" and not self.file:
            raise InvalidSpec("alphabet mode 'file' needs a file path")


@dataclass(frozen=True)
class DetectorSpec:
    kind: str                       # aml | centroid | knn | hist
    name: str
    k: int = 1
    samples: int = 4
    bin_width: float = 1e-6

    def __post_init__(self) -> None:
        if self.kind not in ("aml", "centroid", "knn", "hist"):
            raise InvalidSpec(f"unknown detector kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    scenario: str
    system: SystemDescription
    alphabet: AlphabetSpec
    detectors: tuple[DetectorSpec, ...]
    nu_values: tuple[float, ...]
    trials_per_point: int
    master_seed: int
    output_dir: str
    candidate_set_size: int = DEFAULT_CANDIDATE_SET_SIZE

    def __post_init__(self) -> None:
        if not self.nu_values or any(v <= 0 for v in self.nu_values):
            raise InvalidSpec("nu_values must be non-empty and positive")
        if self.trials_per_point < 1:
            raise InvalidSpec("trials_per_point must be >= 1")


_TOP_KEYS = {
    "scenario",
    "H_diag",
    "tx_noise",
    "ch_noise",
    "rx_noise",
    "sensor",
    "feasible",
    "alphabet",
    "candidate_set_size",
    "detectors",
    "nu_values",
    "trials_per_point",
    "master_seed",
    "output_dir",
}
_NOISE_KEYS = {"mu", "cov"}
_CH_NOISE_KEYS = {"mu", "cov", "nu_c"}
_SENSOR_KEYS = {"preset", "file"}
_FEASIBLE_KEYS = {"lo", "hi"}
_ALPHABET_KEYS = {"mode", "N", "metric", "domain", "file"}
_DETECTOR_KEYS = {"kind", "name", "k", "samples", "bin_width"}


def _reject_unknown(table: dict, allowed: set, where: str) -> None:
    extra = sorted(set(table) - allowed)
    if extra:
        raise UnknownKey(f"unknown key {extra[0]!r} in {where}")


def _as_vector(value, dim: int, where: str) -> np.ndarray:
    if isinstance(value, (int, float)):
        return np.full(dim, float(value))
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != (dim,):
        raise ParseError(f"{where}: expected {dim} entries, got shape {arr.shape}")
    return arr


def _as_cov(value, dim: int, where: str) -> np.ndarray:
    """Scalar -> scalar * I, vector -> diag, nested lists -> full matrix."""
    if isinstance(value, (int, float)):
        return float(value) * np.eye(dim)
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim == 1:
        if arr.shape != (dim,):
            raise ParseError(f"{where}: expected {dim} diagonal entries")
        return np.diag(arr)
    if arr.shape != (dim, dim):
        raise ParseError(f"{where}: expected a {dim}x{dim} matrix")
    return arr


def _parse_gaussian(table: dict, default_cov: float, dim: int, where: str) -> GaussianNoise:
    _reject_unknown(table, _NOISE_KEYS, where)
    mu = _as_vector(table.get("mu", 0.0), dim, f"{where}.mu")
    cov = _as_cov(table.get("cov", default_cov), dim, f"{where}.cov")
    return GaussianNoise(mu=mu, cov=cov)


def _parse_ch_noise(table: dict, scenario: str, dim: int) -> NoiseSpec:
    _reject_unknown(table, _CH_NOISE_KEYS, "ch_noise")
    if "nu_c" in table:
        if "mu" in table or "cov" in table:
            raise ParseError("ch_noise: give either nu_c or mu/cov, not both")
        return SqrtChannelNoise(nu_c=float(table["nu_c"]))
    if scenario == "SDCN" and not table:
        return SqrtChannelNoise(nu_c=1.0)
    return _parse_gaussian(table, DEFAULT_CH_COV_SIN, dim, "ch_noise")


def _parse_detector(entry, index: int) -> DetectorSpec:
    if isinstance(entry, str):
        entry = {"kind": entry}
    if not isinstance(entry, dict):
        raise ParseError(f"detectors[{index}]: expected a table or a name")
    _reject_unknown(entry, _DETECTOR_KEYS, f"detectors[{index}]")
    kind = entry.get("kind")
    if kind not in ("aml", "centroid", "knn", "hist"):
        raise ParseError(f"detectors[{index}]: unknown kind {kind!r}")
    if kind == "knn":
        samples = int(entry.get("samples", 4))
        # Default k: 1 for tiny training sets, 5 once there is enough data.
        k = int(entry.get("k", 1 if samples < 100 else 5))
        name = entry.get("name", f"knn-{samples}")
        return DetectorSpec(kind=kind, name=name, k=k, samples=samples)
    if kind == "hist":
        samples = int(entry.get("samples", 10**6))
        bin_width = float(entry.get("bin_width", 1e-6))
        name = entry.get("name", "hist")
        return DetectorSpec(kind=kind, name=name, samples=samples, bin_width=bin_width)
    return DetectorSpec(kind=kind, name=entry.get("name", kind))


def default_system(
    scenario: str,
    h_diag=None,
    tx_noise: GaussianNoise | None = None,
    ch_noise: NoiseSpec | None = None,
    rx_noise: GaussianNoise | None = None,
    sensor=None,
    feasible: FeasibleBox | None = None,
) -> SystemDescription:
    """Two-molecule, two-sensor system with the default parameters."""
    if scenario not in SCENARIOS:
        raise InvalidSpec(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    s = r = 2
    h = ChannelMatrix(np.asarray(h_diag if h_diag is not None else DEFAULT_H_DIAG))
    if tx_noise is None:
        tx_noise = GaussianNoise(np.zeros(s), DEFAULT_TX_COV[scenario] * np.eye(s))
    if ch_noise is None:
        if scenario == "SDCN":
            ch_noise = SqrtChannelNoise(nu_c=1.0)
        else:
            ch_noise = GaussianNoise(np.zeros(s), DEFAULT_CH_COV_SIN * np.eye(s))
    if rx_noise is None:
        rx_noise = GaussianNoise(np.zeros(r), DEFAULT_RX_COV[scenario] * np.eye(r))
    if sensor is None:
        sensor = sensor_preset(TGS_PRESET_NAME)
    if feasible is None:
        feasible = FeasibleBox(
            np.asarray(DEFAULT_FEASIBLE_LO), np.asarray(DEFAULT_FEASIBLE_HI)
        )
    return SystemDescription(
        s=s,
        r=r,
        channel=h,
        tx_noise=tx_noise,
        ch_noise=ch_noise,
        rx_noise=rx_noise,
        sensor=sensor,
        feasible=feasible,
    )


def parse_config(path) -> ExperimentConfig:
    """Parse a TOML experiment config, filling scenario defaults."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc

    _reject_unknown(data, _TOP_KEYS, "config")
    scenario = data.get("scenario")
    if scenario is None:
        raise MissingScenario(f"{path}: config must set 'scenario'")
    if scenario not in SCENARIOS:
        raise ParseError(f"{path}: scenario must be one of {SCENARIOS}, got {scenario!r}")

    s = r = 2
    h_diag = _as_vector(data.get("H_diag", list(DEFAULT_H_DIAG)), s, "H_diag")
    tx = _parse_gaussian(
        data.get("tx_noise", {}), DEFAULT_TX_COV[scenario], s, "tx_noise"
    )
    ch = _parse_ch_noise(data.get("ch_noise", {}), scenario, s)
    rx = _parse_gaussian(
        data.get("rx_noise", {}), DEFAULT_RX_COV[scenario], r, "rx_noise"
    )

    sensor_table = data.get("sensor", {})
    _reject_unknown(sensor_table, _SENSOR_KEYS, "sensor")
    if "file" in sensor_table:
        sensor = load_sensor_file(sensor_table["file"])
    else:
        sensor = sensor_preset(sensor_table.get("preset", TGS_PRESET_NAME))

    feas_table = data.get("feasible", {})
    _reject_unknown(feas_table, _FEASIBLE_KEYS, "feasible")
    feasible = FeasibleBox(
        _as_vector(feas_table.get("lo", list(DEFAULT_FEASIBLE_LO)), s, "feasible.lo"),
        _as_vector(feas_table.get("hi", list(DEFAULT_FEASIBLE_HI)), s, "feasible.hi"),
    )

    system = default_system(
        scenario,
        h_diag=h_diag,
        tx_noise=tx,
        ch_noise=ch,
        rx_noise=rx,
        sensor=sensor,
        feasible=feasible,
    )

    alpha_table = data.get("alphabet", {})
    _reject_unknown(alpha_table, _ALPHABET_KEYS, "alphabet")
    alphabet = AlphabetSpec(
        mode=alpha_table.get("mode", "designed"),
        n=int(alpha_table.get("N", 8)),
        metric=alpha_table.get("metric", "snr"),
        domain=alpha_table.get("domain", "sod"),
        file=alpha_table.get("file"),
    )

    detectors = tuple(
        _parse_detector(entry, i)
        for i, entry in enumerate(data.get("detectors", ["aml"]))
    )
    names = [d.name for d in detectors]
    if len(set(names)) != len(names):
        raise ParseError(f"{path}: detector names must be unique, got {names}")

    nu_values = tuple(float(v) for v in data.get("nu_values", [1.0]))

    return ExperimentConfig(
        scenario=scenario,
        system=system,
        alphabet=alphabet,
        detectors=detectors,
        nu_values=nu_values,
        trials_per_point=int(data.get("trials_per_point", 10_000)),
        master_seed=int(data.get("master_seed", 0)),
        output_dir=str(data.get("output_dir", "out")),
        candidate_set_size=int(
            data.get("candidate_set_size", DEFAULT_CANDIDATE_SET_SIZE)
        ),
    )
