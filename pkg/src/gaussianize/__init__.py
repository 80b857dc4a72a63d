"""Exact normalizing transforms, classic comparison transforms, normality
tests and test-retest reliability.

The hot numerical kernels are compiled with numba when it is importable;
set ``GAUSSIANIZE_DISABLE_NUMBA=1`` before import to force the pure-numpy
implementations. ``BACKEND`` reports which one is active.
"""
__version__ = "0.1.0"

from .kernels import BACKEND
from .errors import (
    DataFormatError, DegenerateSampleError, DomainError, FitError, GaussianizeError,
    ReliabilityError, SampleTooSmallError, TransformOverflowError,
)
from .special import (
    Probability, erf, erf_inv, erfc, log_std_normal_cdf, std_normal_cdf, std_normal_quantile,
)
from .distributions import (
    DISTRIBUTIONS, LogNormal, Normal, Uniform, Weibull, analytic_gaussianize,
    parse_distribution, weibull_cdf, weibull_pdf,
)
from .rank import (
    RankTransformSpec, apply_spec, edf, fit_rank_normal, gaussianize, midranks,
    normal_scores, transform_to_target,
)
from .classic import (
    BoxCoxFit, BoxCoxGrid, BoxCoxParams, boxcox, boxcox_scaled, fit_boxcox,
    log_transform, logit_transform,
)
from .normality import TestReport, anderson_darling, ks_normality, moments
from .dataset import LongitudinalDataset, read_long_csv, write_long_csv
from .reliability import (
    PairedTTest, ReliabilityReport, TestRetest, average_test_retest, paired_t_test,
    pearson, reliability_study, spearman,
)
from .rosenblatt import BivariateNormalParams, forward, inverse
from .synth import SynthConfig, generate
