"""Analytic distributions and exact closed-form normalizing transforms.

Each distribution is a frozen parameter record with ``pdf``, ``cdf``, ``sf``,
``quantile`` and ``sample``. Sampling is inverse-CDF from a seeded uniform
stream, so a seed fixes every draw bit-for-bit.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .errors import DomainError, TransformOverflowError

__all__ = [
    "Normal", "LogNormal", "Weibull", "Uniform", "DISTRIBUTIONS",
    "parse_distribution", "uniform_open", "as_generator", "weibull_pdf",
    "weibull_cdf", "analytic_gaussianize",
]


def as_generator(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def uniform_open(rng, size):
    """Uniform draws strictly inside (0, 1), on the grid (k + 1/2) / 2**53."""
    k = as_generator(rng).integers(0, 2**53, size=size, dtype=np.int64)
    return (k + 0.5) * 2.0**-53


def _ndtri(p):
    p = np.asarray(p, dtype=np.float64)
    flat = np.ascontiguousarray(p).ravel()
    return kernels.ndtri(flat).reshape(p.shape)


def _ndtr(z):
    z = np.asarray(z, dtype=np.float64)
    flat = np.ascontiguousarray(z).ravel()
    return kernels.ndtr(flat).reshape(z.shape)


def _out(x, values):
    return float(values) if np.ndim(x) == 0 else values


def _check_probabilities(p):
    p = np.asarray(p, dtype=np.float64)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise DomainError("quantile needs probabilities strictly inside (0, 1)")
    return p


class _Distribution:
    name = ""

    def sample(self, size, seed=None):
        return self.quantile(uniform_open(seed, size))

    def from_normal(self, z):
        """``quantile(Phi(z))`` evaluated without losing the upper tail."""
        z = np.asarray(z, dtype=np.float64)
        lower = z <= 0
        p = _ndtr(np.where(lower, z, -z))
        return np.where(lower, self.quantile(p), self.isf(p))

    def params(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Normal(_Distribution):
    mean: float = 0.0
    sd: float = 1.0
    name = "normal"

    def __post_init__(self):
        if not (math.isfinite(self.mean) and self.sd > 0 and math.isfinite(self.sd)):
            raise DomainError(f"normal needs finite mean and sd > 0, got ({self.mean}, {self.sd})")

    def params(self):
        return (self.mean, self.sd)

    def pdf(self, x):
        z = (np.asarray(x, dtype=np.float64) - self.mean) / self.sd
        return _out(x, np.exp(-0.5 * z * z) / (self.sd * math.sqrt(2 * math.pi)))

    def cdf(self, x):
        return _out(x, _ndtr((np.asarray(x, dtype=np.float64) - self.mean) / self.sd))

    def sf(self, x):
        return _out(x, _ndtr((self.mean - np.asarray(x, dtype=np.float64)) / self.sd))

    def quantile(self, p):
        return _out(p, self.mean + self.sd * _ndtri(_check_probabilities(p)))

    def isf(self, q):
        return _out(q, self.mean - self.sd * _ndtri(_check_probabilities(q)))


@dataclass(frozen=True)
class LogNormal(_Distribution):
    log_mean: float = 0.0
    log_sd: float = 1.0
    name = "lognormal"

    def __post_init__(self):
        if not (math.isfinite(self.log_mean) and self.log_sd > 0 and math.isfinite(self.log_sd)):
            raise DomainError(
                f"lognormal needs finite log_mean and log_sd > 0, got ({self.log_mean}, {self.log_sd})"
            )

    def params(self):
        return (self.log_mean, self.log_sd)

    def _z(self, x):
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < 0):
            raise DomainError("lognormal is supported on x >= 0")
        with np.errstate(divide="ignore"):
            return (np.log(x) - self.log_mean) / self.log_sd

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        z = self._z(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.exp(-0.5 * z * z) / (x * self.log_sd * math.sqrt(2 * math.pi))
        return _out(x, np.where(x > 0, d, 0.0))

    def cdf(self, x):
        return _out(x, _ndtr(self._z(x)))

    def sf(self, x):
        return _out(x, _ndtr(-self._z(x)))

    def quantile(self, p):
        return _out(p, np.exp(self.log_mean + self.log_sd * _ndtri(_check_probabilities(p))))

    def isf(self, q):
        return _out(q, np.exp(self.log_mean - self.log_sd * _ndtri(_check_probabilities(q))))


@dataclass(frozen=True)
class Weibull(_Distribution):
    """Two-parameter Weibull with density ``a b^-a x^(a-1) exp(-(x/b)^a)``."""

    shape: float = 1.0
    scale: float = 1.0
    name = "weibull"

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0 and math.isfinite(self.shape) and math.isfinite(self.scale)):
            raise DomainError(f"weibull needs shape > 0 and scale > 0, got ({self.shape}, {self.scale})")

    def params(self):
        return (self.shape, self.scale)

    def _u(self, x):
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < 0) or np.any(np.isnan(x)):
            raise DomainError("weibull is supported on x >= 0")
        return (x / self.scale) ** self.shape

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        u = self._u(x)
        a, b = self.shape, self.scale
        with np.errstate(divide="ignore", invalid="ignore"):
            d = a / b * (x / b) ** (a - 1.0) * np.exp(-u)
        if a == 1.0:
            d = np.where(x == 0, 1.0 / b, d)
        elif a > 1.0:
            d = np.where(x == 0, 0.0, d)
        return _out(x, d)

    def cdf(self, x):
        return _out(x, -np.expm1(-self._u(x)))

    def sf(self, x):
        return _out(x, np.exp(-self._u(x)))

    def quantile(self, p):
        p = _check_probabilities(p)
        return _out(p, self.scale * (-np.log1p(-p)) ** (1.0 / self.shape))

    def isf(self, q):
        q = _check_probabilities(q)
        return _out(q, self.scale * (-np.log(q)) ** (1.0 / self.shape))


@dataclass(frozen=True)
class Uniform(_Distribution):
    low: float = 0.0
    high: float = 1.0
    name = "uniform"

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high) and self.high > self.low):
            raise DomainError(f"uniform needs low < high, got ({self.low}, {self.high})")

    def params(self):
        return (self.low, self.high)

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        inside = (x >= self.low) & (x <= self.high)
        return _out(x, np.where(inside, 1.0 / (self.high - self.low), 0.0))

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return _out(x, np.clip((x - self.low) / (self.high - self.low), 0.0, 1.0))

    def sf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return _out(x, np.clip((self.high - x) / (self.high - self.low), 0.0, 1.0))

    def quantile(self, p):
        p = _check_probabilities(p)
        return _out(p, self.low + (self.high - self.low) * p)

    def isf(self, q):
        q = _check_probabilities(q)
        return _out(q, self.high - (self.high - self.low) * q)


DISTRIBUTIONS = {cls.name: cls for cls in (Normal, LogNormal, Weibull, Uniform)}


def parse_distribution(text):
    """Parse ``"name:p1,p2"`` (e.g. ``"weibull:9,1"``) into a distribution.

    Parameters may be omitted to take the defaults (``"normal"``).
    """
    name, _, rest = text.strip().partition(":")
    name = name.strip().lower()
    if name not in DISTRIBUTIONS:
        raise DomainError(f"unknown distribution {name!r}; choose from {sorted(DISTRIBUTIONS)}")
    try:
        params = [float(v) for v in rest.split(",")] if rest.strip() else []
    except ValueError:
        raise DomainError(f"bad distribution parameters in {text!r}") from None
    if len(params) not in (0, 2):
        raise DomainError(f"{name} takes exactly two parameters, got {text!r}")
    return DISTRIBUTIONS[name](*params)


def weibull_pdf(x, shape, scale):
    return Weibull(shape, scale).pdf(x)


def weibull_cdf(x, shape, scale):
    return Weibull(shape, scale).cdf(x)


def analytic_gaussianize(x, source):
    """Map ``x`` to a standard normal score through a known source CDF.

    ``source`` is either a distribution object (its survival function is
    then used above the median, keeping precision in the upper tail) or
    any strictly increasing CDF callable.

    Raises
    ------
    TransformOverflowError
        If the CDF at some ``x`` is exactly 0 or 1.
    """
    xa = np.asarray(x, dtype=np.float64)
    if hasattr(source, "cdf"):
        cdf = np.asarray(source.cdf(xa), dtype=np.float64)
        sf = np.asarray(source.sf(xa), dtype=np.float64) if hasattr(source, "sf") else 1.0 - cdf
    else:
        cdf = np.asarray(source(xa), dtype=np.float64)
        sf = 1.0 - cdf
    bad = ~((cdf > 0.0) & (sf > 0.0))
    if np.any(bad):
        offending = np.atleast_1d(xa)[np.atleast_1d(bad)][0]
        raise TransformOverflowError(
            f"source CDF is 0 or 1 at x={float(offending)!r}; the normal score would be infinite"
        )
    lower = cdf <= 0.5
    y = np.where(lower, _ndtri(np.where(lower, cdf, 0.5)), -_ndtri(np.where(lower, 0.5, sf)))
    return _out(x, y)
