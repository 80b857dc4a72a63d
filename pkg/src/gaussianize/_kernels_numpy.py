"""Pure-numpy twins of the kernels in ``_kernels_numba``.

Same signatures, same branch structure and constants, vectorized with masks.
Results agree with the compiled path to a few ulp.
"""
import numpy as np

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


def _horner(coefs, x):
    # coefs lowest degree first
    acc = np.full_like(x, coefs[-1])
    for c in coefs[-2::-1]:
        acc = acc * x + c
    return acc


_PP = (PP0, PP1, PP2, PP3, PP4)
_QQ = (1.0, QQ1, QQ2, QQ3, QQ4, QQ5)
_PA = (PA0, PA1, PA2, PA3, PA4, PA5, PA6)
_QA = (1.0, QA1, QA2, QA3, QA4, QA5, QA6)
_RA = (RA0, RA1, RA2, RA3, RA4, RA5, RA6, RA7)
_SA = (1.0, SA1, SA2, SA3, SA4, SA5, SA6, SA7, SA8)
_RB = (RB0, RB1, RB2, RB3, RB4, RB5, RB6)
_SB = (1.0, SB1, SB2, SB3, SB4, SB5, SB6, SB7)


def _tail_exponent(ax):
    s = 1.0 / (ax * ax)
    near = ax < ERF_BREAK_TAIL
    ratio = np.where(near, _horner(_RA, s) / _horner(_SA, s), _horner(_RB, s) / _horner(_SB, s))
    c = DEKKER * ax
    hi = c - (c - ax)
    return -hi * hi - 0.5625, (hi - ax) * (hi + ax) + ratio


def _erfc_tail(ax):
    a, b = _tail_exponent(ax)
    return np.exp(a) * np.exp(b) / ax


def _small_ratio(x):
    z = x * x
    return _horner(_PP, z) / _horner(_QQ, z)


def _mid_ratio(ax):
    s = ax - 1.0
    return _horner(_PA, s) / _horner(_QA, s)


def erf(x):
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    out = np.empty_like(x)

    m = ax < ERF_BREAK_SMALL
    xs = x[m]
    out[m] = np.where(np.abs(xs) < TINY_ERF, xs + EFX * xs, xs + xs * _small_ratio(xs))

    m = (ax >= ERF_BREAK_SMALL) & (ax < ERF_BREAK_MID)
    v = ERX + _mid_ratio(ax[m])
    out[m] = np.where(x[m] >= 0.0, v, -v)

    m = (ax >= ERF_BREAK_MID) & (ax < ERF_SATURATE)
    r = _erfc_tail(ax[m])
    out[m] = np.where(x[m] >= 0.0, 1.0 - r, r - 1.0)

    m = ax >= ERF_SATURATE
    out[m] = np.sign(x[m])
    return out


def erfc(x):
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    out = np.empty_like(x)

    m = ax < ERF_BREAK_SMALL
    xs = x[m]
    y = _small_ratio(xs)
    out[m] = np.where(
        np.abs(xs) < TINY_ERFC,
        1.0 - xs,
        np.where(xs < 0.25, 1.0 - (xs + xs * y), 0.5 - (xs * y + (xs - 0.5))),
    )

    m = (ax >= ERF_BREAK_SMALL) & (ax < ERF_BREAK_MID)
    pq = _mid_ratio(ax[m])
    out[m] = np.where(x[m] >= 0.0, 1.0 - ERX - pq, 1.0 + (ERX + pq))

    m = (ax >= ERF_BREAK_MID) & (ax < ERFC_UNDERFLOW)
    r = _erfc_tail(ax[m])
    xm = x[m]
    out[m] = np.where(xm > 0.0, r, np.where(xm < -ERF_SATURATE, 2.0, 2.0 - r))

    m = ax >= ERFC_UNDERFLOW
    out[m] = np.where(x[m] > 0.0, 0.0, 2.0)
    return out


def log_erfc(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)

    m = x >= ERF_BREAK_TAIL
    xt = x[m]
    a, b = _tail_exponent(xt)
    out[m] = a + b - np.log(xt)

    m = x < -1.0
    out[m] = np.log1p(-0.5 * erfc(-x[m])) + LN2

    m = (x >= -1.0) & (x < ERF_BREAK_TAIL)
    out[m] = np.log(erfc(x[m]))
    return out


def _giles(w, x):
    central = w < 5.0
    wc = w - 2.5
    pc = np.full_like(w, GILES_CENTRAL[0])
    for c in GILES_CENTRAL[1:]:
        pc = c + pc * wc
    wt = np.sqrt(np.where(central, 5.0, w)) - 3.0
    pt = np.full_like(w, GILES_TAIL[0])
    for c in GILES_TAIL[1:]:
        pt = c + pt * wt
    return np.where(central, pc, pt) * x


def _halley(y, residual, sign):
    # runs the fixed iteration budget; converged entries stop moving
    active = np.ones(y.shape, dtype=bool)
    for _ in range(HALLEY_MAX_ITER):
        if not active.any():
            break
        ya = y[active]
        r = residual(ya, active) / (sign * TWO_OVER_SQRTPI * np.exp(-ya * ya))
        step = r / (1.0 + ya * r)
        y[active] = ya - step
        done = np.abs(step) <= HALLEY_RTOL * np.maximum(np.abs(y[active]), 1e-300)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return y


def _erf_inv_central(x):
    y = _giles(-np.log((1.0 - x) * (1.0 + x)), x)
    return _halley(y, lambda ya, act: erf(ya) - x[act], 1.0)


def _erfc_inv_upper(q):
    out = np.empty_like(q)
    m = q >= 0.5
    out[m] = _erf_inv_central(1.0 - q[m])

    qt = q[~m]
    w = -np.log(qt * (2.0 - qt))
    t = -np.log(qt)
    with np.errstate(invalid="ignore"):
        asym = np.sqrt(t - 0.5 * (LOG_PI + np.log(t)))
    y = np.where(w < GILES_MAX_W, _giles(w, 1.0 - qt), asym)
    out[~m] = _halley(y, lambda ya, act: erfc(ya) - qt[act], -1.0)
    return out


def erfc_inv(q):
    q = np.asarray(q, dtype=np.float64)
    out = np.full_like(q, np.nan)
    out[q == 0.0] = np.inf
    out[q == 2.0] = -np.inf
    inner = (q > 0.0) & (q < 2.0)
    upper = inner & (q > 1.0)
    lower = inner & ~upper
    out[upper] = -_erfc_inv_upper(2.0 - q[upper])
    out[lower] = _erfc_inv_upper(q[lower])
    return out


def erf_inv(x):
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    out = np.empty_like(x)
    m = ax <= 0.5
    out[m] = _erf_inv_central(x[m])
    tail = _erfc_inv_upper(1.0 - ax[~m])
    out[~m] = np.where(x[~m] > 0.0, tail, -tail)
    return out


def ndtr(z):
    return 0.5 * erfc(-np.asarray(z, dtype=np.float64) * INV_SQRT2)


def log_ndtr(z):
    a = -np.asarray(z, dtype=np.float64) * INV_SQRT2
    out = np.empty_like(a)
    m = a < -1.0
    out[m] = np.log1p(-0.5 * erfc(-a[m]))
    out[~m] = log_erfc(a[~m]) - LN2
    return out


def ndtri(p):
    return -SQRT2 * erfc_inv(2.0 * np.asarray(p, dtype=np.float64))


def _standardize_rows(mat):
    n = mat.shape[-1]
    m = mat.mean(axis=-1, keepdims=True)
    dev = mat - m
    with np.errstate(invalid="ignore", over="ignore"):
        ss = (dev * dev).sum(axis=-1, keepdims=True)
    ok = (ss > 0.0) & np.isfinite(ss)
    sd = np.sqrt(np.where(ok, ss, 1.0) / (n - 1))
    return dev / sd, ok[..., 0]


def _ad_sorted_rows(mat):
    n = mat.shape[-1]
    z, ok = _standardize_rows(mat)
    z = np.where(ok[..., None], z, 0.0)
    weights = 2.0 * np.arange(n) + 1.0
    terms = log_ndtr(z.ravel()).reshape(z.shape) + log_ndtr(-z[..., ::-1].ravel()).reshape(z.shape)
    a2 = -n - (weights * terms).sum(axis=-1) / n
    return np.where(ok, a2, np.nan)


def _ks_sorted_rows(mat):
    n = mat.shape[-1]
    z, ok = _standardize_rows(mat)
    z = np.where(ok[..., None], z, 0.0)
    c = ndtr(z.ravel()).reshape(z.shape)
    i = np.arange(n, dtype=np.float64)
    d = np.maximum(((i + 1.0) / n - c).max(axis=-1), (c - i / n).max(axis=-1))
    return np.where(ok, np.maximum(d, 0.0), np.nan)


def ad_statistic(xs):
    return float(_ad_sorted_rows(np.asarray(xs, dtype=np.float64)[None, :])[0])


def ks_statistic(xs):
    return float(_ks_sorted_rows(np.asarray(xs, dtype=np.float64)[None, :])[0])


def ad_statistic_rows(mat):
    return _ad_sorted_rows(np.sort(mat, axis=1))


def ks_statistic_rows(mat):
    return _ks_sorted_rows(np.sort(mat, axis=1))


def boxcox_grid_ad(ys, lambda1, lambda2):
    out = np.full((lambda1.size, lambda2.size), np.nan)
    near_log = np.abs(lambda1) < BOXCOX_LOG_THRESHOLD
    safe = np.where(near_log, 1.0, lambda1)[:, None]
    for j, shift in enumerate(lambda2):
        if not ys[0] + shift > 0.0:
            continue
        logs = np.log(ys + shift)
        with np.errstate(over="ignore", invalid="ignore"):
            img = np.where(near_log[:, None], logs[None, :], np.expm1(safe * logs[None, :]) / safe)
            out[:, j] = _ad_sorted_rows(img)
    return out
