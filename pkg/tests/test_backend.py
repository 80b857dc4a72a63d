import os
import subprocess
import sys

import pytest

from gaussianize import _config


def backend_under(env_value):
    env = dict(os.environ)
    env.pop(_config.DISABLE_FLAG, None)
    if env_value is not None:
        env[_config.DISABLE_FLAG] = env_value
    out = subprocess.run([sys.executable, "-c", "import gaussianize; print(gaussianize.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


@pytest.mark.parametrize("value,expected", [
    (None, "numba"), ("1", "numpy"), ("true", "numpy"), ("0", "numba"), ("", "numba"),
])
def test_env_flag_selects_backend(value, expected):
    assert backend_under(value) == expected


def test_numpy_backend_end_to_end():
    env = dict(os.environ, **{_config.DISABLE_FLAG: "1"})
    code = (
        "import numpy as np, gaussianize as g\n"
        "x = g.LogNormal(0, 1).sample(193, seed=1)\n"
        "y, _ = g.gaussianize(x)\n"
        "assert g.BACKEND == 'numpy'\n"
        "assert g.anderson_darling(y).p_value > 0.99\n"
        "print(g.fit_boxcox(x).params)\n"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.returncode == 0, out.stderr


def test_backends_give_the_same_fit():
    from gaussianize import LogNormal, _kernels_numba, _kernels_numpy
    from gaussianize.classic import default_lambda1, default_lambda2
    import numpy as np

    ys = np.sort(LogNormal(0, 1).sample(200, seed=3))
    l1, l2 = default_lambda1(), default_lambda2(ys)
    a = _kernels_numba.boxcox_grid_ad(ys, l1, l2)
    b = _kernels_numpy.boxcox_grid_ad(ys, l1, l2)
    assert np.unravel_index(np.nanargmin(a), a.shape) == np.unravel_index(np.nanargmin(b), b.shape)
