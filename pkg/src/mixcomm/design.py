"""Greedy max-min mixture alphabet design and its separability metrics.

Symbols are added one at a time: each step draws a fresh uniform candidate
set over the feasible box and keeps the candidate with the largest minimum
distance to the symbols chosen so far.  Distances are evaluated between
per-symbol output beliefs, either after the sensor (output domain) or
before it (concentration domain), so the design can account for the
non-linear, cross-reactive sensor response or deliberately ignore it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import _backend
from .errors import DomainError, ParseError, UnsupportedDimension
from .gaussian import GaussianBelief, chol_inverse
from .likelihoods import symbol_belief
from .rng import RngStream
from .system import FeasibleBox, SystemDescription

_LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class PepGridSpec:
    """Grid used to integrate the pairwise density overlap numerically."""

    sigma_span: float = 6.0
    points_per_axis: int = 201

    def __post_init__(self) -> None:
        if self.sigma_span <= 0:
            raise DomainError("sigma_span must be positive")
        if self.points_per_axis < 16:
            raise DomainError("need at least 16 grid points per axis")
        if self.points_per_axis % 2 == 0:
            raise DomainError("points_per_axis must be odd")


@dataclass(frozen=True, eq=False)
class DesignConfig:
    """Inputs of one greedy design run."""

    n: int
    candidate_set_size: int
    metric: str                      # "l2" | "snr" | "pep"
    domain: str                      # "sod" | "sid"
    feasible: FeasibleBox
    seed: int
    pep_grid: PepGridSpec = field(default_factory=PepGridSpec)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("alphabet size must be >= 1")
        if self.candidate_set_size < 1:
            raise DomainError("candidate set size must be >= 1")
        if self.metric not in ("l2", "snr", "pep"):
            raise DomainError(f"unknown metric {self.metric!r}")
        if self.domain not in ("sod", "sid"):
            raise DomainError(f"unknown design domain {self.domain!r}")


def d_l2(bi: GaussianBelief, bj: GaussianBelief) -> float:
    """Euclidean distance between belief means."""
    return float(np.linalg.norm(bi.mean - bj.mean))


def d_snr(bi: GaussianBelief, bj: GaussianBelief) -> float:
    """Squared mean separation over the summed variance along it.

    Degenerate (coincident) means return 0 rather than dividing by zero.
    """
    diff = bi.mean - bj.mean
    gap = float(np.linalg.norm(diff))
    scale = max(
        1.0,
        float(np.max(np.abs(bi.mean))),
        float(np.max(np.abs(bj.mean))),
    )
    if gap < 1e-15 * scale:
        return 0.0
    p = diff / gap
    denom = float(p @ bi.cov @ p + p @ bj.cov @ p)
    if denom <= 0.0:
        return float(np.inf)
    return gap * gap / denom


def _density_params(b: GaussianBelief) -> tuple[np.ndarray, float]:
    linv, logdet = chol_inverse(b.cov)
    norm_const = float(np.exp(-0.5 * logdet - 0.5 * b.dim * _LOG_2PI))
    return linv, norm_const


def d_pep(
    bi: GaussianBelief, bj: GaussianBelief, g: PepGridSpec | None = None
) -> float:
    """Negative integral of min(p_i, p_j): more negative means more confusable.

    Midpoint rule over the union of the two means' +-sigma_span boxes;
    supports output dimension 1 or 2.
    """
    g = g or PepGridSpec()
    dim = bi.dim
    if dim > 2:
        raise UnsupportedDimension(
            f"grid integration supports dimension <= 2, got {dim}"
        )
    sd_i = np.sqrt(np.maximum(np.diag(bi.cov), 0.0))
    sd_j = np.sqrt(np.maximum(np.diag(bj.cov), 0.0))
    lo = np.minimum(bi.mean - g.sigma_span * sd_i, bj.mean - g.sigma_span * sd_j)
    hi = np.maximum(bi.mean + g.sigma_span * sd_i, bj.mean + g.sigma_span * sd_j)
    if np.any(hi <= lo):
        # Deterministic beliefs have zero integration volume; compare means.
        return -1.0 if np.array_equal(bi.mean, bj.mean) else 0.0
    linv_i, nc_i = _density_params(bi)
    linv_j, nc_j = _density_params(bj)
    overlap = _backend.pep_overlap(
        np.ascontiguousarray(bi.mean),
        np.ascontiguousarray(linv_i),
        nc_i,
        np.ascontiguousarray(bj.mean),
        np.ascontiguousarray(linv_j),
        nc_j,
        np.ascontiguousarray(lo),
        np.ascontiguousarray(hi),
        g.points_per_axis,
    )
    return -float(overlap)


def make_metric(
    name: str, grid: PepGridSpec | None = None
) -> Callable[[GaussianBelief, GaussianBelief], float]:
    if name == "l2":
        return d_l2
    if name == "snr":
        return d_snr
    if name == "pep":
        g = grid or PepGridSpec()
        return lambda bi, bj: d_pep(bi, bj, g)
    raise DomainError(f"unknown metric {name!r}")


def _uniform_in_box(box: FeasibleBox, rng: RngStream, n: int) -> np.ndarray:
    u = rng.uniforms(n * box.dim).reshape(n, box.dim)
    return box.lo + u * (box.hi - box.lo)


def select_candidate(
    cand_beliefs, existing_beliefs, metric
) -> int:
    """Greedy step: candidate with the largest min distance to the chosen set."""
    scores = np.array(
        [min(metric(cb, xb) for xb in existing_beliefs) for cb in cand_beliefs]
    )
    return int(np.argmax(scores))


def design_alphabet(cfg: DesignConfig, sys: SystemDescription) -> np.ndarray:
    """Greedy max-min design of an N-symbol mixture alphabet.

    Deterministic given cfg.seed; returns symbols in insertion order.
    """
    stage = "z" if cfg.domain == "sod" else "y"
    belief = lambda sym: symbol_belief(sym, sys, stage)
    metric = make_metric(cfg.metric, cfg.pep_grid)
    rng = RngStream(cfg.seed, 0)

    anchor = belief(_uniform_in_box(cfg.feasible, rng.substream(0), 1)[0])
    chosen: list[np.ndarray] = []
    chosen_beliefs: list[GaussianBelief] = []
    step = 0
    while len(chosen) < cfg.n:
        candidates = _uniform_in_box(
            cfg.feasible, rng.substream(step + 1), cfg.candidate_set_size
        )
        cand_beliefs = [belief(c) for c in candidates]
        reference = chosen_beliefs if chosen_beliefs else [anchor]
        pick = select_candidate(cand_beliefs, reference, metric)
        chosen.append(candidates[pick])
        chosen_beliefs.append(cand_beliefs[pick])
        step += 1
    return np.array(chosen)


def baseline_csk(
    n: int,
    fixed_ammonia: float = 72e3,
    ethanol_range: tuple[float, float] = (15e3, 50e3),
) -> np.ndarray:
    """Single-molecule baseline: ethanol equally spaced, ammonia fixed."""
    if n < 2:
        raise DomainError("CSK baseline needs at least 2 symbols")
    ethanol = np.linspace(ethanol_range[0], ethanol_range[1], n)
    return np.column_stack([np.full(n, float(fixed_ammonia)), ethanol])


def baseline_random(n: int, box: FeasibleBox, rng: RngStream) -> np.ndarray:
    """n i.i.d. uniform draws from the feasible box."""
    if n < 1:
        raise DomainError("need at least 1 symbol")
    return _uniform_in_box(box, rng, n)


def save_alphabet(path, symbols: np.ndarray) -> None:
    """One symbol per row, one decimal column per molecule type."""
    symbols = np.atleast_2d(np.asarray(symbols, dtype=np.float64))
    lines = ["# mixture alphabet: one symbol per row, concentrations in ppm"]
    for row in symbols:
        lines.append(" ".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_alphabet(path) -> np.ndarray:
    rows = []
    width = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        try:
            values = [float(v) for v in text.split()]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise ParseError(
                f"{path}:{lineno}: expected {width} columns, got {len(values)}"
            )
        rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no symbols found")
    arr = np.array(rows)
    if np.any(arr < 0):
        raise ParseError(f"{path}: concentrations must be non-negative")
    return arr
