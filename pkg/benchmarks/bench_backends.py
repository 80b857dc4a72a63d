"""Numba vs NumPy kernels.

Times each hot kernel in both implementations on the same inputs and checks
the results agree before reporting. Compilation is excluded (one warm-up
call per kernel).

    python3 benchmarks/bench_backends.py [--repeat 5] [--json out.json]
"""
import argparse
import json
import platform
import time

import numpy as np

from gaussianize import _kernels_numba as nb
from gaussianize import _kernels_numpy as npk
from gaussianize.classic import default_lambda1, default_lambda2


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    x = rng.uniform(-6, 6, 1_000_000)
    p = rng.uniform(1e-12, 1 - 1e-12, 1_000_000)
    u = rng.uniform(-0.999999, 0.999999, 1_000_000)
    rows = rng.standard_normal((2000, 193))
    ys = np.sort(rng.lognormal(size=200))
    l1, l2 = default_lambda1(), default_lambda2(ys)
    return [
        ("erf 1e6", lambda m: m.erf(x)),
        ("erfc 1e6", lambda m: m.erfc(x)),
        ("ndtr 1e6", lambda m: m.ndtr(x)),
        ("ndtri 1e6", lambda m: m.ndtri(p)),
        ("erf_inv 1e6", lambda m: m.erf_inv(u)),
        ("AD rows 2000x193", lambda m: m.ad_statistic_rows(rows.copy())),
        ("KS rows 2000x193", lambda m: m.ks_statistic_rows(rows.copy())),
        (f"Box-Cox AD grid {l1.size}x{l2.size}, n=200", lambda m: m.boxcox_grid_ad(ys, l1, l2)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    results = []
    print(f"{'kernel':<38} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, call in cases(rng):
        ref, got = call(npk), call(nb)  # also compiles the numba kernel
        if not np.allclose(ref, got, rtol=1e-9, atol=1e-300, equal_nan=True):
            raise SystemExit(f"{name}: backends disagree")
        t_np = best_of(lambda: call(npk), args.repeat)
        t_nb = best_of(lambda: call(nb), args.repeat)
        results.append({"kernel": name, "numpy_s": t_np, "numba_s": t_nb, "speedup": t_np / t_nb})
        print(f"{name:<38} {t_np * 1e3:>8.1f}ms {t_nb * 1e3:>8.1f}ms {t_np / t_nb:>7.1f}x")

    if args.json:
        meta = {"python": platform.python_version(), "machine": platform.machine(), "repeat": args.repeat}
        with open(args.json, "w") as fh:
            json.dump({"meta": meta, "results": results}, fh, indent=2)


if __name__ == "__main__":
    main()
