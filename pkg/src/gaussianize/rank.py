"""Rank-based inverse normal transformation.

The empirical distribution function of a sample is shifted down by half a
step, so it runs from 1/(2N) to 1 - 1/(2N) and never touches 0 or 1. Feeding
those probabilities through the standard normal quantile (or any other
quantile function) gives an order-preserving map onto an exact set of target
scores.
"""
from dataclasses import dataclass, field
import re

import numpy as np

from . import kernels
from ._validation import as_sample
from .errors import DataFormatError, DomainError, TransformOverflowError

__all__ = [
    "midranks", "edf", "gaussianize", "normal_scores", "RankTransformSpec",
    "fit_rank_normal", "apply_spec", "transform_to_target", "format_specs",
    "parse_specs",
]


def midranks(values):
    """1-based ranks; tied values share the mean of the positions they occupy."""
    x = np.asarray(values, dtype=np.float64)
    n = x.size
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    new_group = np.empty(n, dtype=bool)
    new_group[:1] = True
    np.not_equal(xs[1:], xs[:-1], out=new_group[1:])
    starts = np.flatnonzero(new_group)
    counts = np.diff(np.append(starts, n))
    group_rank = starts + (counts + 1) / 2.0
    ranks = np.empty(n)
    ranks[order] = np.repeat(group_rank, counts)
    return ranks


def edf(sample):
    """Adjusted EDF value of every observation, in input order.

    For untied data the values are a permutation of (2i - 1) / (2N).
    """
    x = as_sample(sample)
    return (midranks(x) - 0.5) / x.size


def normal_scores(n):
    """The sorted normal scores Phi^-1((2i - 1) / (2n)), i = 1..n."""
    p = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    return kernels.ndtri(p)


@dataclass(frozen=True, eq=False)
class RankTransformSpec:
    """A fitted rank-normal map, reusable on new data via :func:`apply_spec`.

    ``scores`` are standard normal scores; the target mean and sd are
    applied on output.
    """

    breakpoints: np.ndarray
    scores: np.ndarray
    mu: float = 0.0
    sigma: float = 1.0
    n: int = field(default=0)

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=np.float64)
        sc = np.array(self.scores, dtype=np.float64)
        if bp.ndim != 1 or bp.shape != sc.shape or bp.size == 0:
            raise DomainError("breakpoints and scores must be equal-length non-empty vectors")
        if np.any(np.diff(bp) <= 0) or np.any(np.diff(sc) <= 0):
            raise DomainError("breakpoints and scores must be strictly increasing")
        if not (self.sigma > 0 and np.isfinite(self.sigma) and np.isfinite(self.mu)):
            raise DomainError(f"target sd must be positive, got {self.sigma!r}")
        bp.setflags(write=False)
        sc.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "scores", sc)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "n", int(self.n) if self.n else int(bp.size))

    def __eq__(self, other):
        if not isinstance(other, RankTransformSpec):
            return NotImplemented
        return (
            self.n == other.n and self.mu == other.mu and self.sigma == other.sigma
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.scores, other.scores)
        )

    __hash__ = None

    def to_text(self, measure=None):
        head = f"# rank-normal n={self.n} mu={self.mu!r} sigma={self.sigma!r}"
        if measure is not None:
            head += f" measure={measure}"
        rows = [head, "breakpoint,score"]
        rows += [f"{b!r},{s!r}" for b, s in zip(self.breakpoints.tolist(), self.scores.tolist())]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_text(cls, text):
        specs = parse_specs(text)
        if len(specs) != 1:
            raise DataFormatError(f"expected one transform table, found {len(specs)}")
        return next(iter(specs.values()))


def fit_rank_normal(sample, mu=0.0, sigma=1.0):
    x = as_sample(sample)
    p = edf(x)
    bp, first = np.unique(x, return_index=True)
    return RankTransformSpec(bp, kernels.ndtri(p[first]), mu, sigma, x.size)


def gaussianize(sample, mu=0.0, sigma=1.0):
    """Replace each observation by the normal score of its adjusted rank.

    Returns
    -------
    values : ndarray
        ``mu + sigma * Phi^-1(edf_i)`` in input order.
    spec : RankTransformSpec
        The fitted map, for reuse on held-out data.
    """
    if not sigma > 0:
        raise DomainError(f"target sd must be positive, got {sigma!r}")
    x = as_sample(sample)
    z = kernels.ndtri(edf(x))
    spec = fit_rank_normal(x, mu, sigma)
    return mu + sigma * z, spec


def apply_spec(spec, new_values):
    """Apply a fitted map to new data.

    Exact breakpoint hits take their stored score, values in between are
    linearly interpolated, values outside the training range clamp to the
    extreme scores.

    Returns
    -------
    values : ndarray
    n_clamped : int
        How many inputs fell outside the training range.
    """
    x = as_sample(new_values, name="new_values")
    z = np.interp(x, spec.breakpoints, spec.scores)
    n_clamped = int(np.count_nonzero((x < spec.breakpoints[0]) | (x > spec.breakpoints[-1])))
    return spec.mu + spec.sigma * z, n_clamped


def transform_to_target(sample, target_quantile):
    """Map a sample onto any target law through its quantile function.

    ``target_quantile`` must accept an array of probabilities in (0, 1).
    """
    x = as_sample(sample)
    p = edf(x)
    out = np.asarray(target_quantile(p), dtype=np.float64)
    if out.shape != x.shape:
        raise DomainError("target quantile must return one value per probability")
    bad = ~np.isfinite(out)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise TransformOverflowError(
            f"target quantile is not finite for observation {i} (value {x[i]!r}, edf {p[i]!r})"
        )
    return out


_HEADER = re.compile(
    r"^#\s*rank-normal\s+n=(?P<n>\d+)\s+mu=(?P<mu>\S+)\s+sigma=(?P<sigma>\S+)(?:\s+measure=(?P<measure>.*))?$"
)


def format_specs(specs):
    """Serialize ``{measure: spec}`` as concatenated tables (sorted by name)."""
    return "".join(specs[m].to_text(measure=m) for m in sorted(specs))


def parse_specs(text):
    """Parse one or more serialized tables into ``{measure or None: spec}``."""
    out = {}
    current = None

    def close():
        if current is not None:
            key, head, rows = current
            try:
                bp = [r[0] for r in rows]
                sc = [r[1] for r in rows]
                out[key] = RankTransformSpec(bp, sc, head["mu"], head["sigma"], head["n"])
            except DomainError as exc:
                raise DataFormatError(f"invalid transform table for {key!r}: {exc}") from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER.match(line)
            if not m:
                raise DataFormatError("unrecognized header", lineno)
            close()
            try:
                head = {"n": int(m["n"]), "mu": float(m["mu"]), "sigma": float(m["sigma"])}
            except ValueError:
                raise DataFormatError("bad numeric field in header", lineno) from None
            current = (m["measure"], head, [])
            continue
        if current is None:
            raise DataFormatError("table row before header", lineno)
        if line == "breakpoint,score":
            continue
        parts = line.split(",")
        try:
            current[2].append((float(parts[0]), float(parts[1])))
            if len(parts) != 2:
                raise ValueError
        except (ValueError, IndexError):
            raise DataFormatError(f"expected 'breakpoint,score', got {raw!r}", lineno) from None
    close()
    if not out:
        raise DataFormatError("no transform table found")
    return out
