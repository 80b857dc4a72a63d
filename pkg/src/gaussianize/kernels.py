"""Kernel dispatch: numba when available, numpy otherwise (or when forced).

See ``_config.DISABLE_FLAG``. Both backends expose the same names.
"""
from ._config import BACKEND, USE_NUMBA

if USE_NUMBA:
    from . import _kernels_numba as impl
else:
    from . import _kernels_numpy as impl

erf = impl.erf
erfc = impl.erfc
erf_inv = impl.erf_inv
erfc_inv = impl.erfc_inv
ndtr = impl.ndtr
log_ndtr = impl.log_ndtr
ndtri = impl.ndtri
ad_statistic = impl.ad_statistic
ks_statistic = impl.ks_statistic
ad_statistic_rows = impl.ad_statistic_rows
ks_statistic_rows = impl.ks_statistic_rows
boxcox_grid_ad = impl.boxcox_grid_ad

__all__ = [
    "BACKEND", "erf", "erfc", "erf_inv", "erfc_inv", "ndtr", "log_ndtr",
    "ndtri", "ad_statistic", "ks_statistic", "ad_statistic_rows",
    "ks_statistic_rows", "boxcox_grid_ad",
]
