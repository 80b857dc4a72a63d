"""Bivariate normal <-> independent uniforms on the unit square.

The forward map sends y1 through its marginal CDF and y2 through its
conditional CDF given y1; the inverse undoes both steps. For a bivariate
normal the conditional law of y2 given y1 is normal with mean
``mu2 + rho * (sigma2 / sigma1) * (y1 - mu1)`` and sd
``sigma2 * sqrt(1 - rho^2)``.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .errors import DomainError

__all__ = ["BivariateNormalParams", "forward", "inverse"]


@dataclass(frozen=True)
class BivariateNormalParams:
    mu1: float = 0.0
    mu2: float = 0.0
    sigma1: float = 1.0
    sigma2: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        if not (self.sigma1 > 0 and self.sigma2 > 0):
            raise DomainError("sigma1 and sigma2 must be positive")
        if not -1.0 < self.rho < 1.0:
            raise DomainError(f"rho must lie in (-1, 1), got {self.rho!r}")
        if not all(math.isfinite(v) for v in (self.mu1, self.mu2, self.sigma1, self.sigma2)):
            raise DomainError("parameters must be finite")

    @property
    def conditional_sd(self):
        return self.sigma2 * math.sqrt(1.0 - self.rho * self.rho)

    def conditional_mean(self, y1):
        return self.mu2 + self.rho * (self.sigma2 / self.sigma1) * (y1 - self.mu1)


def _arrays(a, b, name):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    a, b = np.broadcast_arrays(a, b)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DomainError(f"{name} requires finite inputs")
    return a, b


def _apply(kernel, v):
    flat = np.ascontiguousarray(v, dtype=np.float64).ravel()
    return kernel(flat).reshape(v.shape)


def _ret(out, scalar):
    return tuple(float(o) for o in out) if scalar else out


def forward(y1, y2, params):
    """Map (y1, y2) to (x1, x2) in (0, 1)^2.

    With (y1, y2) bivariate normal under ``params``, (x1, x2) are
    independent uniforms.
    """
    scalar = np.ndim(y1) == 0 and np.ndim(y2) == 0
    y1, y2 = _arrays(y1, y2, "forward")
    z1 = (y1 - params.mu1) / params.sigma1
    z2 = (y2 - params.conditional_mean(y1)) / params.conditional_sd
    return _ret((_apply(kernels.ndtr, z1), _apply(kernels.ndtr, z2)), scalar)


def inverse(x1, x2, params):
    """Map (x1, x2) in the open unit square back to (y1, y2)."""
    scalar = np.ndim(x1) == 0 and np.ndim(x2) == 0
    x1, x2 = _arrays(x1, x2, "inverse")
    inside = (x1 > 0) & (x1 < 1) & (x2 > 0) & (x2 < 1)
    if not np.all(inside):
        raise DomainError("inverse needs probabilities strictly inside (0, 1)")
    y1 = params.mu1 + params.sigma1 * _apply(kernels.ndtri, x1)
    y2 = params.conditional_mean(y1) + params.conditional_sd * _apply(kernels.ndtri, x2)
    return _ret((y1, y2), scalar)
