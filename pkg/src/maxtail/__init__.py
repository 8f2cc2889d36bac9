"""Tail-exponent estimation for dependent heavy-tailed series via the dyadic max-spectrum."""
from ._backend import BACKEND
from .autoselect import AutoSelectConfig, Selection, mse_curve, select_j1
from .covariance import CovarianceModel, default_sigma1, read_table, sigma1_matrix, write_table
from .errors import (
    ConfigError,
    CovarianceError,
    DegenerateEstimateError,
    DegenerateEstimateWarning,
    IngestionError,
    InstabilityWarning,
    InsufficientDataError,
    MaxTailError,
    NumericalError,
    ParameterError,
    PositivityError,
    RangeError,
)
from .estimator import (
    ConfidenceInterval,
    ScaleRange,
    TailEstimate,
    WeightVector,
    asymptotic_ci,
    estimate,
    montecarlo_ci,
    pivot_scale_invariance_check,
    regression_weights,
)
from .frechet import (
    FrechetParams,
    ParetoParams,
    frechet_cdf,
    frechet_quantile,
    frechet_sample,
    log2_frechet_moments,
    pareto_sample,
)
from .generators import ModelConfig, extremal_index_moving_maxima, gen_series
from .hill import HillPlot, hill_estimate, hill_plot
from .spectrum import MaxSpectrum, StreamState, compute_spectrum_batch, finalize, stream_update

__version__ = "0.1.0"
