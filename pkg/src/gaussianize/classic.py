"""Classic normalizing transforms: log, logit and two-parameter Box-Cox.

Box-Cox parameters are fitted by grid search, keeping the pair whose
transformed sample has the largest Anderson-Darling p-value.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from ._coefficients import BOXCOX_LOG_THRESHOLD
from ._validation import as_sample
from .errors import DomainError, FitError, SampleTooSmallError
from .normality import MIN_TEST_SIZE, ad_pvalue

__all__ = [
    "BoxCoxParams", "BoxCoxFit", "BoxCoxGrid", "log_transform",
    "logit_transform", "boxcox", "boxcox_scaled", "fit_boxcox",
    "default_lambda1", "default_lambda2",
]


@dataclass(frozen=True)
class BoxCoxParams:
    lambda1: float = 1.0
    lambda2: float = 0.0


@dataclass(frozen=True)
class BoxCoxFit:
    params: BoxCoxParams
    ad_p_value: float
    ad_statistic: float
    grid_evaluations: int
    feasible_evaluations: int

    def to_dict(self):
        return {
            "lambda1": self.params.lambda1,
            "lambda2": self.params.lambda2,
            "p": self.ad_p_value,
            "statistic": self.ad_statistic,
            "grid_evaluations": self.grid_evaluations,
            "feasible_evaluations": self.feasible_evaluations,
        }


def log_transform(sample):
    x = as_sample(sample)
    bad = x <= 0
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"log transform needs positive values; index {i} is {float(x[i])!r}")
    return np.log(x)


def logit_transform(sample):
    x = as_sample(sample)
    bad = (x <= 0) | (x >= 1)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"logit transform needs values in (0, 1); index {i} is {float(x[i])!r}")
    return np.log(x / (1.0 - x))


def _shifted(y, params):
    v = np.asarray(y, dtype=np.float64) + params.lambda2
    bad = ~(v > 0)
    if np.any(bad):
        i = int(np.flatnonzero(np.atleast_1d(bad))[0])
        raise DomainError(
            f"Box-Cox needs y + lambda2 > 0; index {i} gives {float(np.atleast_1d(v)[i])!r}"
        )
    return v


def boxcox(y, params):
    """``((y + l2)^l1 - 1) / l1``, or ``log(y + l2)`` when ``|l1| < 1e-9``.

    Evaluated as ``expm1(l1 * log(y + l2)) / l1``, which stays accurate as
    ``l1`` approaches zero.
    """
    v = _shifted(y, params)
    lv = np.log(v)
    lam = params.lambda1
    out = lv if abs(lam) < BOXCOX_LOG_THRESHOLD else np.expm1(lam * lv) / lam
    return float(out) if np.ndim(y) == 0 else out


def boxcox_scaled(sample, params):
    """Box-Cox divided by ``gm^(l1 - 1)``, gm the geometric mean of ``y + l2``.

    The result keeps the units of ``y`` whatever ``l1`` is; the ``l1 -> 0``
    limit is ``gm * log(y + l2)``.
    """
    v = _shifted(as_sample(sample), params)
    lv = np.log(v)
    log_gm = float(lv.mean())
    lam = params.lambda1
    if abs(lam) < BOXCOX_LOG_THRESHOLD:
        return math.exp(log_gm) * lv
    return np.expm1(lam * lv) / (lam * math.exp((lam - 1.0) * log_gm))


def default_lambda1():
    """-2.00, -1.95, ..., 3.00."""
    return np.round(np.arange(-40, 61) * 0.05, 10)


def default_lambda2(sample, count=41, upper="span"):
    """Data-relative shift grid.

    For positive data: ``count`` evenly spaced points from ``-0.99 * min``
    up to the sample span ``max - min`` (``upper="span"``, the default), or
    only up to ``+min`` (``upper="min"``). The narrow variant keeps the
    smallest shifted value between 1% and 200% of itself; on skewed data the
    wide grid lets large shifts paired with large powers tie the log branch,
    which blurs the power estimate.

    For data with ``min <= 0`` the range starts just above ``-min`` (a
    hundredth of the span) and covers one span (or one ``|min|`` for
    ``upper="min"``, if larger than zero).

    Zero is added when it is feasible, so the unshifted transforms are
    always candidates.
    """
    if upper not in ("span", "min"):
        raise DomainError(f"upper must be 'span' or 'min', got {upper!r}")
    x = as_sample(sample)
    lo, hi = float(x.min()), float(x.max())
    span = hi - lo
    if lo > 0:
        start = -0.99 * lo
        stop = span if upper == "span" else lo
    else:
        start = -lo + 0.01 * (span if span > 0 else 1.0)
        width = span if upper == "span" or lo == 0 else -lo
        stop = start + width
    grid = np.linspace(start, stop, count)
    if lo > 0:
        grid = np.union1d(grid, [0.0])
    return grid


@dataclass(frozen=True)
class BoxCoxGrid:
    """Candidate parameter values.

    ``lambda2=None`` means the data-relative default of
    :func:`default_lambda2` with ``lambda2_count`` points and upper end
    ``lambda2_upper``.
    """

    lambda1: tuple = None
    lambda2: tuple = None
    lambda2_count: int = 41
    lambda2_upper: str = "span"

    def resolve(self, sample):
        l1 = default_lambda1() if self.lambda1 is None else np.asarray(self.lambda1, dtype=np.float64)
        if self.lambda2 is None:
            l2 = default_lambda2(sample, self.lambda2_count, self.lambda2_upper)
        else:
            l2 = np.asarray(self.lambda2, dtype=np.float64)
        if l1.size == 0 or l2.size == 0:
            raise FitError("Box-Cox grid is empty")
        return np.ascontiguousarray(l1, dtype=np.float64), np.ascontiguousarray(l2, dtype=np.float64)


def fit_boxcox(sample, grid=None):
    """Grid-search the Box-Cox pair maximizing the Anderson-Darling p-value.

    Infeasible pairs (some ``y + l2 <= 0``) are skipped. Ties on the p-value
    go to the smaller ``|l1|``, then the smaller ``|l2|``.

    Raises
    ------
    SampleTooSmallError
        Fewer than 8 observations.
    FitError
        No feasible grid point.
    """
    x = as_sample(sample)
    if x.size < MIN_TEST_SIZE:
        raise SampleTooSmallError(
            f"Box-Cox fitting needs at least {MIN_TEST_SIZE} observations, got {x.size}"
        )
    l1, l2 = (grid or BoxCoxGrid()).resolve(x)
    a2 = kernels.boxcox_grid_ad(np.sort(x), l1, l2)
    feasible = np.isfinite(a2)
    if not feasible.any():
        raise FitError("every Box-Cox grid point is infeasible for this sample")
    n = x.size
    pvals = np.full(a2.shape, -np.inf)
    for k, j in zip(*np.nonzero(feasible)):
        pvals[k, j] = ad_pvalue(float(a2[k, j]), n)
    # lexicographic: max p, then min |l1|, then min |l2|, then min A^2
    k_idx, j_idx = np.nonzero(feasible)
    order = np.lexsort((a2[k_idx, j_idx], np.abs(l2[j_idx]), np.abs(l1[k_idx]), -pvals[k_idx, j_idx]))
    k, j = k_idx[order[0]], j_idx[order[0]]
    return BoxCoxFit(
        BoxCoxParams(float(l1[k]), float(l2[j])),
        float(pvals[k, j]),
        float(a2[k, j]),
        int(a2.size),
        int(feasible.sum()),
    )
