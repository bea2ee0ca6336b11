"""Experiment orchestration: seeded SER estimation, noise sweeps, exports.

Reproducibility contract: every random draw descends from the config's
master_seed through fixed-purpose substreams, and Monte Carlo trials use
one counter-derived stream per trial index, so results are byte-identical
across runs and across any partitioning of trials over workers.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend
from .config import DEFAULT_CSK_AMMONIA, ExperimentConfig
from .design import (
    DesignConfig,
    baseline_csk,
    baseline_random,
    design_alphabet,
    load_alphabet,
)
from .detectors import (
    aml_detect_batch,
    centroid_detect_batch,
    hist_detect_batch,
    hist_fit,
    knn_detect_batch,
    knn_fit,
)
from .errors import InvalidSpec
from .likelihoods import build_symbol_likelihoods, symbol_belief
from .rng import RngStream
from .system import SystemDescription, sample_chain_batch, scale_noise, validate_alphabet

# Fixed substream purposes under the master seed.
_PUR_DESIGN = 1
_PUR_FIT = 2
_PUR_TRIALS = 3
_PUR_CONSTELLATION = 4


def constellation_rng(master_seed: int) -> RngStream:
    """Stream the constellation export draws from, for a given master seed."""
    return RngStream(master_seed, 0).substream(_PUR_CONSTELLATION)

_Z95 = 1.959963984540054

SER_CSV_HEADER = "alphabet,detector,nu,inv_nu,trials,errors,ser,wilson_halfwidth,seed"


def wilson_halfwidth(errors: int, trials: int, z: float = _Z95) -> float:
    """Half-width of the Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise InvalidSpec("trials must be >= 1")
    p = errors / trials
    denom = 1.0 + z * z / trials
    return float(
        (z / denom) * np.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    )


@dataclass(frozen=True)
class SerEstimate:
    ser: float
    halfwidth: float
    errors: int
    trials: int


def estimate_ser(
    alphabet,
    detect,
    sys: SystemDescription,
    trials: int,
    rng: RngStream,
    workers: int = 1,
) -> SerEstimate:
    """Monte Carlo symbol error rate of a detector on an alphabet.

    `detect` maps an (n, R) batch of observations to (n,) symbol indices.
    Trial t draws its symbol from one shared pick stream and its noise from
    the per-trial substream t, so the result does not depend on how the
    trial range is split across workers.
    """
    symbols = validate_alphabet(alphabet, sys.s)
    n_sym = symbols.shape[0]
    pick_words = rng.substream(0).uniform_words(trials)
    picks = _backend.symbol_picks(pick_words, n_sym)
    keys = rng.substream(1).substream_keys(trials)

    def run_chunk(lo: int, hi: int) -> int:
        sent = picks[lo:hi]
        _, _, z = sample_chain_batch(symbols[sent], sys, keys[lo:hi])
        return int(np.sum(detect(z) != sent))

    workers = max(1, int(workers))
    bounds = np.linspace(0, trials, workers + 1).astype(int)
    if workers == 1:
        errors = run_chunk(0, trials)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(run_chunk, bounds[i], bounds[i + 1])
                for i in range(workers)
            ]
            errors = sum(f.result() for f in futures)
    return SerEstimate(
        ser=errors / trials,
        halfwidth=wilson_halfwidth(errors, trials),
        errors=errors,
        trials=trials,
    )


def resolve_alphabet(cfg: ExperimentConfig) -> tuple[str, np.ndarray]:
    """Alphabet named by the config: designed, baseline, or loaded."""
    spec = cfg.alphabet
    if spec.mode == "designed":
        design = DesignConfig(
            n=spec.n,
            candidate_set_size=cfg.candidate_set_size,
            metric=spec.metric,
            domain=spec.domain,
            feasible=cfg.system.feasible,
            seed=RngStream(cfg.master_seed, 0).substream(_PUR_DESIGN).key,
        )
        return f"mda-{spec.metric}-{spec.domain}", design_alphabet(design, cfg.system)
    if spec.mode == "csk":
        lo, hi = cfg.system.feasible.lo[1], cfg.system.feasible.hi[1]
        return "csk", baseline_csk(spec.n, DEFAULT_CSK_AMMONIA, (lo, hi))
    if spec.mode == "random":
        rng = RngStream(cfg.master_seed, 0).substream(_PUR_DESIGN)
        return "random", baseline_random(spec.n, cfg.system.feasible, rng)
    return Path(spec.file).stem, load_alphabet(spec.file)


def make_detector(spec, table, symbols, sys: SystemDescription, fit_rng: RngStream):
    """Batch detection callable for one detector spec at one noise point."""
    if spec.kind == "aml":
        return lambda z: aml_detect_batch(z, table)
    if spec.kind == "centroid":
        return lambda z: centroid_detect_batch(z, table)
    if spec.kind == "knn":
        trained = knn_fit(sys, symbols, spec.samples, spec.k, fit_rng)
        return lambda z: knn_detect_batch(z, trained)
    if spec.kind == "hist":
        trained = hist_fit(sys, symbols, spec.samples, spec.bin_width, fit_rng)
        return lambda z: hist_detect_batch(z, trained)
    raise InvalidSpec(f"unknown detector kind {spec.kind!r}")


@dataclass(frozen=True)
class SerPoint:
    alphabet: str
    detector: str
    nu: float
    inv_nu: float
    trials: int
    errors: int
    ser: float
    wilson_halfwidth: float
    seed: int


def run_sweep(cfg: ExperimentConfig, workers: int = 1) -> list[SerPoint]:
    """SER of every configured detector at every noise scale.

    The offline phase (likelihood table, data-driven training) is redone per
    noise scale; all detectors at one scale share the same trial streams so
    their comparison rides on common randomness.
    """
    root = RngStream(cfg.master_seed, 0)
    name, symbols = resolve_alphabet(cfg)
    rows = []
    for i_nu, nu in enumerate(cfg.nu_values):
        sys_nu = scale_noise(cfg.system, nu)
        table = build_symbol_likelihoods(symbols, sys_nu)
        trial_rng = root.substream(_PUR_TRIALS).substream(i_nu)
        for i_det, spec in enumerate(cfg.detectors):
            fit_rng = root.substream(_PUR_FIT).substream(i_nu).substream(i_det)
            detect = make_detector(spec, table, symbols, sys_nu, fit_rng)
            est = estimate_ser(
                symbols, detect, sys_nu, cfg.trials_per_point, trial_rng, workers
            )
            rows.append(
                SerPoint(
                    alphabet=name,
                    detector=spec.name,
                    nu=float(nu),
                    inv_nu=1.0 / float(nu),
                    trials=est.trials,
                    errors=est.errors,
                    ser=est.ser,
                    wilson_halfwidth=est.halfwidth,
                    seed=cfg.master_seed,
                )
            )
    rows.sort(key=lambda p: (p.alphabet, p.detector, p.nu))
    return rows


def ser_csv_text(rows) -> str:
    """Stable full-precision CSV for SER results."""
    lines = [SER_CSV_HEADER]
    for p in rows:
        lines.append(
            f"{p.alphabet},{p.detector},{p.nu!r},{p.inv_nu!r},{p.trials},"
            f"{p.errors},{p.ser!r},{p.wilson_halfwidth!r},{p.seed}"
        )
    return "\n".join(lines) + "\n"


def write_ser_csv(path, rows) -> None:
    Path(path).write_text(ser_csv_text(rows))


def ellipse_points(
    mean: np.ndarray, cov: np.ndarray, k_sigma: float = 3.0, n: int = 64
) -> np.ndarray:
    """Closed k-sigma ellipse polyline from the covariance's principal axes."""
    evals, evecs = np.linalg.eigh(cov)
    axes = k_sigma * np.sqrt(np.maximum(evals, 0.0))
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    circle = np.stack([np.cos(theta), np.sin(theta)])
    return mean[None, :] + (evecs @ (axes[:, None] * circle)).T


@dataclass(frozen=True)
class ConstellationData:
    """Per-symbol beliefs, confidence ellipses, and raw samples, per stage."""

    symbols: np.ndarray
    means: dict          # stage -> (N, dim) belief means
    covs: dict           # stage -> (N, dim, dim)
    ellipses: dict       # stage -> list of (64, 2) arrays or None
    samples: dict        # stage -> list of (samples_per_symbol, dim) arrays


def export_constellation(
    alphabet, sys: SystemDescription, samples_per_symbol: int, rng: RngStream
) -> ConstellationData:
    """Belief moments, 3-sigma ellipses, and sampled clouds in both domains.

    Stage "sid" is the concentration domain at the receiver (y); stage "sod"
    is the sensor-output domain (z).  Ellipses are only produced for
    2-dimensional stages; samples and means are always emitted.
    """
    symbols = validate_alphabet(alphabet, sys.s)
    means = {"sid": [], "sod": []}
    covs = {"sid": [], "sod": []}
    ellipses = {"sid": [], "sod": []}
    samples = {"sid": [], "sod": []}
    for j, sym in enumerate(symbols):
        by = symbol_belief(sym, sys, "y")
        bz = symbol_belief(sym, sys, "z")
        keys = rng.substream(j).substream_keys(samples_per_symbol)
        syms = np.ascontiguousarray(
            np.broadcast_to(sym, (samples_per_symbol, sys.s))
        )
        _, y, z = sample_chain_batch(syms, sys, keys)
        for stage, belief, draws in (("sid", by, y), ("sod", bz, z)):
            means[stage].append(belief.mean)
            covs[stage].append(belief.cov)
            samples[stage].append(draws)
            if belief.dim == 2:
                ellipses[stage].append(ellipse_points(belief.mean, belief.cov))
            else:
                ellipses[stage].append(None)
    for stage in ("sid", "sod"):
        if any(e is None for e in ellipses[stage]):
            warnings.warn(
                f"stage {stage!r} is not 2-dimensional; ellipses omitted",
                stacklevel=2,
            )
    return ConstellationData(
        symbols=symbols,
        means={k: np.array(v) for k, v in means.items()},
        covs={k: np.array(v) for k, v in covs.items()},
        ellipses=ellipses,
        samples=samples,
    )


def _constellation_rows(data: ConstellationData, stage: str):
    for j in range(data.symbols.shape[0]):
        mean = data.means[stage][j]
        yield j, "mean", mean
        ell = data.ellipses[stage][j]
        if ell is not None:
            for point in ell:
                yield j, "ellipse", point
        for point in data.samples[stage][j]:
            yield j, "sample", point


def write_constellation_csvs(data: ConstellationData, outdir) -> list[Path]:
    """Write sid.csv / sod.csv with columns symbol_index,kind,x1,x2."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for stage in ("sid", "sod"):
        path = outdir / f"{stage}.csv"
        lines = ["symbol_index,kind,x1,x2"]
        for j, kind, point in _constellation_rows(data, stage):
            x1 = repr(float(point[0]))
            x2 = repr(float(point[1])) if point.shape[0] > 1 else ""
            lines.append(f"{j},{kind},{x1},{x2}")
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written
