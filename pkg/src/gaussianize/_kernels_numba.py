"""Numba-compiled kernels.

Every public function here has a twin with the same signature and semantics
in ``_kernels_numpy``. Inputs are 1-d (or 2-d for the ``*_rows``/grid
kernels) contiguous float64 arrays; validation happens in the callers.
"""
import math

import numpy as np
from numba import njit

from ._coefficients import (
    BOXCOX_LOG_THRESHOLD, DEKKER, EFX, ERF_BREAK_MID, ERF_BREAK_SMALL,
    ERF_BREAK_TAIL, ERF_SATURATE, ERFC_UNDERFLOW, ERX, GILES_CENTRAL,
    GILES_MAX_W, GILES_TAIL, HALLEY_MAX_ITER, HALLEY_RTOL, INV_SQRT2, LN2,
    LOG_PI, PA0, PA1, PA2, PA3, PA4, PA5, PA6, PP0, PP1, PP2, PP3, PP4, QA1,
    QA2, QA3, QA4, QA5, QA6, QQ1, QQ2, QQ3, QQ4, QQ5, RA0, RA1, RA2, RA3, RA4,
    RA5, RA6, RA7, RB0, RB1, RB2, RB3, RB4, RB5, RB6, SA1, SA2, SA3, SA4, SA5,
    SA6, SA7, SA8, SB1, SB2, SB3, SB4, SB5, SB6, SB7, SQRT2, TINY_ERF,
    TINY_ERFC, TWO_OVER_SQRTPI,
)

_JIT = dict(cache=True, nogil=True, error_model="numpy")


# ---------------------------------------------------------------------------
# scalar special functions
# ---------------------------------------------------------------------------

@njit(**_JIT)
def _tail_exponent(ax):
    # log(erfc(ax)) + log(ax) for ax >= 1.25, split so that ax*ax is exact
    s = 1.0 / (ax * ax)
    if ax < ERF_BREAK_TAIL:
        r = RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7))))))
        q = 1.0 + s * (SA1 + s * (SA2 + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8)))))))
    else:
        r = RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6)))))
        q = 1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7))))))
    c = DEKKER * ax
    hi = c - (c - ax)
    return -hi * hi - 0.5625, (hi - ax) * (hi + ax) + r / q


@njit(**_JIT)
def _erfc_tail(ax):
    a, b = _tail_exponent(ax)
    return math.exp(a) * math.exp(b) / ax


@njit(**_JIT)
def _small_ratio(x):
    z = x * x
    r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)))
    s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))))
    return r / s


@njit(**_JIT)
def _mid_ratio(ax):
    s = ax - 1.0
    p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))))
    q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))))
    return p / q


@njit(**_JIT)
def erf_scalar(x):
    ax = abs(x)
    if ax < ERF_BREAK_SMALL:
        if ax < TINY_ERF:
            return x + EFX * x
        return x + x * _small_ratio(x)
    if ax < ERF_BREAK_MID:
        v = ERX + _mid_ratio(ax)
        return v if x >= 0.0 else -v
    if ax >= ERF_SATURATE:
        return 1.0 if x > 0.0 else -1.0
    r = _erfc_tail(ax)
    return 1.0 - r if x >= 0.0 else r - 1.0


@njit(**_JIT)
def erfc_scalar(x):
    ax = abs(x)
    if ax < ERF_BREAK_SMALL:
        if ax < TINY_ERFC:
            return 1.0 - x
        y = _small_ratio(x)
        if x < 0.25:
            return 1.0 - (x + x * y)
        return 0.5 - (x * y + (x - 0.5))
    if ax < ERF_BREAK_MID:
        pq = _mid_ratio(ax)
        if x >= 0.0:
            return 1.0 - ERX - pq
        return 1.0 + (ERX + pq)
    if ax < ERFC_UNDERFLOW:
        if x < -ERF_SATURATE:
            return 2.0
        r = _erfc_tail(ax)
        return r if x > 0.0 else 2.0 - r
    return 0.0 if x > 0.0 else 2.0


@njit(**_JIT)
def log_erfc_scalar(x):
    if x >= ERF_BREAK_TAIL:
        a, b = _tail_exponent(x)
        return a + b - math.log(x)
    if x < -1.0:
        return math.log1p(-0.5 * erfc_scalar(-x)) + LN2
    return math.log(erfc_scalar(x))


@njit(**_JIT)
def _giles(w, x):
    if w < 5.0:
        w = w - 2.5
        p = GILES_CENTRAL[0]
        for k in range(1, 9):
            p = GILES_CENTRAL[k] + p * w
    else:
        w = math.sqrt(w) - 3.0
        p = GILES_TAIL[0]
        for k in range(1, 9):
            p = GILES_TAIL[k] + p * w
    return p * x


@njit(**_JIT)
def _erf_inv_central(x):
    # |x| <= 0.5; Halley on erf(y) - x
    y = _giles(-math.log((1.0 - x) * (1.0 + x)), x)
    for _ in range(HALLEY_MAX_ITER):
        r = (erf_scalar(y) - x) / (TWO_OVER_SQRTPI * math.exp(-y * y))
        step = r / (1.0 + y * r)
        y -= step
        if abs(step) <= HALLEY_RTOL * max(abs(y), 1e-300):
            break
    return y


@njit(**_JIT)
def _erfc_inv_upper(q):
    # 0 < q <= 1, result >= 0
    if q >= 0.5:
        return _erf_inv_central(1.0 - q)
    w = -math.log(q * (2.0 - q))
    if w < GILES_MAX_W:
        y = _giles(w, 1.0 - q)
    else:
        t = -math.log(q)
        y = math.sqrt(t - 0.5 * (LOG_PI + math.log(t)))
    for _ in range(HALLEY_MAX_ITER):
        r = (erfc_scalar(y) - q) / (-TWO_OVER_SQRTPI * math.exp(-y * y))
        step = r / (1.0 + y * r)
        y -= step
        if abs(step) <= HALLEY_RTOL * y:
            break
    return y


@njit(**_JIT)
def erfc_inv_scalar(q):
    if not 0.0 <= q <= 2.0:
        return math.nan
    if q == 0.0:
        return math.inf
    if q == 2.0:
        return -math.inf
    if q > 1.0:
        return -_erfc_inv_upper(2.0 - q)
    return _erfc_inv_upper(q)


@njit(**_JIT)
def erf_inv_scalar(x):
    ax = abs(x)
    if ax <= 0.5:
        return _erf_inv_central(x)
    y = _erfc_inv_upper(1.0 - ax)
    return y if x > 0.0 else -y


@njit(**_JIT)
def ndtr_scalar(z):
    return 0.5 * erfc_scalar(-z * INV_SQRT2)


@njit(**_JIT)
def log_ndtr_scalar(z):
    a = -z * INV_SQRT2
    if a < -1.0:
        return math.log1p(-0.5 * erfc_scalar(-a))
    return log_erfc_scalar(a) - LN2


@njit(**_JIT)
def ndtri_scalar(p):
    return -SQRT2 * erfc_inv_scalar(2.0 * p)


# ---------------------------------------------------------------------------
# array wrappers
# ---------------------------------------------------------------------------

@njit(**_JIT)
def erf(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out[i] = erf_scalar(x[i])
    return out


@njit(**_JIT)
def erfc(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out[i] = erfc_scalar(x[i])
    return out


@njit(**_JIT)
def erf_inv(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out[i] = erf_inv_scalar(x[i])
    return out


@njit(**_JIT)
def erfc_inv(q):
    out = np.empty_like(q)
    for i in range(q.size):
        out[i] = erfc_inv_scalar(q[i])
    return out


@njit(**_JIT)
def ndtr(z):
    out = np.empty_like(z)
    for i in range(z.size):
        out[i] = ndtr_scalar(z[i])
    return out


@njit(**_JIT)
def log_ndtr(z):
    out = np.empty_like(z)
    for i in range(z.size):
        out[i] = log_ndtr_scalar(z[i])
    return out


@njit(**_JIT)
def ndtri(p):
    out = np.empty_like(p)
    for i in range(p.size):
        out[i] = ndtri_scalar(p[i])
    return out


# ---------------------------------------------------------------------------
# goodness-of-fit statistics (parameters estimated from the sample)
# ---------------------------------------------------------------------------

@njit(**_JIT)
def _mean_sd(xs):
    n = xs.size
    m = 0.0
    for i in range(n):
        m += xs[i]
    m /= n
    ss = 0.0
    for i in range(n):
        d = xs[i] - m
        ss += d * d
    if not (ss > 0.0 and ss < np.inf):
        return m, np.nan
    return m, math.sqrt(ss / (n - 1))


@njit(**_JIT)
def ad_statistic(xs):
    """A^2 of an ascending sample against N(mean, sd) fitted to it; nan if degenerate."""
    n = xs.size
    m, sd = _mean_sd(xs)
    if not sd > 0.0:
        return np.nan
    acc = 0.0
    for i in range(n):
        lo = (xs[i] - m) / sd
        hi = (xs[n - 1 - i] - m) / sd
        acc += (2 * i + 1) * (log_ndtr_scalar(lo) + log_ndtr_scalar(-hi))
    return -n - acc / n


@njit(**_JIT)
def ks_statistic(xs):
    n = xs.size
    m, sd = _mean_sd(xs)
    if not sd > 0.0:
        return np.nan
    d = 0.0
    for i in range(n):
        c = ndtr_scalar((xs[i] - m) / sd)
        up = (i + 1.0) / n - c
        dn = c - i / n
        if up > d:
            d = up
        if dn > d:
            d = dn
    return d


@njit(**_JIT)
def ad_statistic_rows(mat):
    out = np.empty(mat.shape[0])
    for r in range(mat.shape[0]):
        out[r] = ad_statistic(np.sort(mat[r]))
    return out


@njit(**_JIT)
def ks_statistic_rows(mat):
    out = np.empty(mat.shape[0])
    for r in range(mat.shape[0]):
        out[r] = ks_statistic(np.sort(mat[r]))
    return out


@njit(**_JIT)
def boxcox_grid_ad(ys, lambda1, lambda2):
    """A^2 of the Box-Cox image of ascending ``ys`` at every (lambda1, lambda2).

    Infeasible shifts (min(ys) + lambda2 <= 0) and degenerate images are nan.
    Box-Cox is increasing in y, so the image stays sorted.
    """
    n = ys.size
    out = np.full((lambda1.size, lambda2.size), np.nan)
    logs = np.empty(n)
    buf = np.empty(n)
    for j in range(lambda2.size):
        shift = lambda2[j]
        if not ys[0] + shift > 0.0:
            continue
        for i in range(n):
            logs[i] = math.log(ys[i] + shift)
        for k in range(lambda1.size):
            lam = lambda1[k]
            if abs(lam) < BOXCOX_LOG_THRESHOLD:
                for i in range(n):
                    buf[i] = logs[i]
            else:
                for i in range(n):
                    buf[i] = math.expm1(lam * logs[i]) / lam
            out[k, j] = ad_statistic(buf)
    return out
