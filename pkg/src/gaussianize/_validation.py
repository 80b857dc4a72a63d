import numpy as np

from .errors import DomainError


def as_sample(values, name="sample", min_size=1):
    """Return ``values`` as a 1-d float64 array of finite numbers."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_size:
        if arr.size == 0:
            raise DomainError(f"{name} is empty")
        raise DomainError(f"{name} needs at least {min_size} observations, got {arr.size}")
    finite = np.isfinite(arr)
    if not finite.all():
        i = int(np.flatnonzero(~finite)[0])
        raise DomainError(f"{name}[{i}] = {arr[i]!r} is not finite")
    return arr
