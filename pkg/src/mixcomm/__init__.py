"""Molecule-mixture communication through non-linear, cross-reactive sensor arrays.

Moment-based approximate-ML detection, data-driven baselines, greedy
max-min alphabet design, and a reproducible Monte Carlo SER harness.
"""

from ._backend import BACKEND
from .config import (
    AlphabetSpec,
    DetectorSpec,
    ExperimentConfig,
    default_system,
    parse_config,
)
from .design import (
    DesignConfig,
    PepGridSpec,
    baseline_csk,
    baseline_random,
    d_l2,
    d_pep,
    d_snr,
    design_alphabet,
    load_alphabet,
    save_alphabet,
)
from .detectors import (
    TrainedHistogram,
    TrainedKnn,
    aml_detect,
    aml_detect_batch,
    centroid_detect,
    centroid_detect_batch,
    hist_detect,
    hist_detect_batch,
    hist_fit,
    knn_detect,
    knn_detect_batch,
    knn_fit,
)
from .gaussian import GaussianBelief, cholesky_psd, log_gauss_pdf, validate_belief
from .harness import (
    SerEstimate,
    SerPoint,
    estimate_ser,
    export_constellation,
    run_sweep,
    wilson_halfwidth,
    write_constellation_csvs,
    write_ser_csv,
)
from .likelihoods import (
    SymbolLikelihoodTable,
    build_symbol_likelihoods,
    moments_mc,
    moments_x,
    moments_y_sdcn,
    moments_y_sin,
    moments_z,
    symbol_belief,
)
from .rng import RngStream
from .sensors import (
    IdentityArray,
    LinearArray,
    MosCoefficients,
    MosPair,
    TGS_PRESET_NAME,
    array_response,
    load_sensor_file,
    mos_response,
    save_sensor_file,
    sensor_preset,
)
from .system import (
    ChannelMatrix,
    FeasibleBox,
    GaussianNoise,
    SqrtChannelNoise,
    SystemDescription,
    sample_observation,
    scale_noise,
)
from .unscented import SigmaPointSet, sigma_points, ut_propagate

__version__ = "0.1.0"
