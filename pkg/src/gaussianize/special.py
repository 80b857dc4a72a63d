"""Error function, its inverse, and the standard normal CDF and quantile.

All functions accept a scalar or an array. Scalars come back as ``float``,
arrays keep their shape.
"""
import numpy as np

from . import kernels
from .errors import DomainError

__all__ = [
    "Probability", "erf", "erfc", "erf_inv", "std_normal_cdf",
    "log_std_normal_cdf", "std_normal_quantile",
]


class Probability(float):
    """A float constrained to the closed interval [0, 1]."""

    def __new__(cls, value):
        v = float(value)
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"probability must lie in [0, 1], got {value!r}")
        return super().__new__(cls, v)


def _flat(x, name):
    arr = np.asarray(x, dtype=np.float64)
    flat = np.ascontiguousarray(arr).ravel()
    if not np.all(np.isfinite(flat)):
        bad = flat[~np.isfinite(flat)][0]
        raise DomainError(f"{name} requires finite input, got {bad!r}")
    return arr, flat


def _shape_like(arr, out):
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def erf(x):
    """Error function, accurate to within 1 ulp."""
    arr, flat = _flat(x, "erf")
    return _shape_like(arr, kernels.erf(flat))


def erfc(x):
    """Complementary error function ``1 - erf(x)``, with full relative
    accuracy in the right tail."""
    arr, flat = _flat(x, "erfc")
    return _shape_like(arr, kernels.erfc(flat))


def erf_inv(x):
    """Inverse error function on the open interval (-1, 1).

    Raises
    ------
    DomainError
        If any ``|x| >= 1`` (the inverse would be infinite).
    """
    arr, flat = _flat(x, "erf_inv")
    if np.any(np.abs(flat) >= 1.0):
        bad = flat[np.abs(flat) >= 1.0][0]
        raise DomainError(f"erf_inv is defined on (-1, 1), got {bad!r}")
    return _shape_like(arr, kernels.erf_inv(flat))


def std_normal_cdf(y):
    """Standard normal CDF, ``(1 + erf(y / sqrt(2))) / 2``.

    Evaluated as ``erfc(-y / sqrt(2)) / 2`` so the left tail keeps full
    relative precision.
    """
    arr, flat = _flat(y, "std_normal_cdf")
    out = kernels.ndtr(flat)
    if arr.ndim == 0:
        return Probability(out[0])
    return out.reshape(arr.shape)


def log_std_normal_cdf(y):
    arr, flat = _flat(y, "log_std_normal_cdf")
    return _shape_like(arr, kernels.log_ndtr(flat))


def std_normal_quantile(p):
    """Standard normal quantile ``sqrt(2) * erf_inv(2p - 1)`` for 0 < p < 1.

    Computed through the inverse complementary error function of ``2p``,
    which avoids the cancellation in ``2p - 1`` for small ``p``.

    Raises
    ------
    DomainError
        If any ``p`` is outside the open unit interval.
    """
    arr, flat = _flat(p, "std_normal_quantile")
    inside = (flat > 0.0) & (flat < 1.0)
    if not np.all(inside):
        bad = flat[~inside][0]
        raise DomainError(f"std_normal_quantile needs 0 < p < 1, got {bad!r}")
    return _shape_like(arr, kernels.ndtri(flat))
