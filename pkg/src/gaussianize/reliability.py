"""Test-retest reliability: correlations of a measure between sessions,
averaged over session pairs, before and after normalizing transforms."""
from dataclasses import dataclass, field
from itertools import combinations
import math

import numpy as np
from scipy import stats

from ._validation import as_sample
from .classic import boxcox, fit_boxcox, log_transform, logit_transform
from .errors import DegenerateSampleError, DomainError, GaussianizeError, ReliabilityError
from .rank import gaussianize, midranks

__all__ = [
    "pearson", "spearman", "session_pairs", "select_window",
    "PairCorrelation", "TestRetest", "average_test_retest", "PairedTTest",
    "paired_t_test", "TRANSFORMS", "MeasureReliability", "ReliabilityReport",
    "reliability_study", "MIN_SUBJECTS",
]

MIN_SUBJECTS = 3

INDEPENDENCE_CAVEAT = (
    "paired t-tests treat per-measure average correlations as independent "
    "observations, although they share subjects and sessions"
)


def _pair(x, y):
    x = as_sample(x, "x")
    y = as_sample(y, "y")
    if x.size != y.size:
        raise DomainError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < MIN_SUBJECTS:
        raise DomainError(f"correlation needs at least {MIN_SUBJECTS} pairs, got {x.size}")
    return x, y


def _corr(x, y):
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if not (sxx > 0 and syy > 0):
        raise DegenerateSampleError("correlation undefined: zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def pearson(x, y):
    """Sample Pearson product-moment correlation."""
    return _corr(*_pair(x, y))


def spearman(x, y):
    """Pearson correlation of the midranks of ``x`` and ``y``."""
    x, y = _pair(x, y)
    return _corr(midranks(x), midranks(y))


def select_window(sessions, window=None):
    """Sessions inside ``window``.

    ``window`` is None (all), an int k or the string ``"first:k"`` (the k
    earliest sessions), or an iterable of session indices.
    """
    sessions = sorted(sessions)
    if window is None:
        return sessions
    if isinstance(window, str):
        head, _, k = window.partition(":")
        if head.strip() != "first" or not k.strip().isdigit():
            raise DomainError(f"window must look like 'first:k', got {window!r}")
        window = int(k)
    if isinstance(window, (int, np.integer)):
        if window < 1:
            raise DomainError("window size must be positive")
        return sessions[: int(window)]
    wanted = {int(s) for s in window}
    return [s for s in sessions if s in wanted]


def session_pairs(sessions, pairing="all"):
    sessions = sorted(sessions)
    if pairing == "all":
        return list(combinations(sessions, 2))
    if pairing == "consecutive":
        return list(zip(sessions[:-1], sessions[1:]))
    raise DomainError(f"pairing must be 'all' or 'consecutive', got {pairing!r}")


@dataclass(frozen=True)
class PairCorrelation:
    session_a: int
    session_b: int
    n_subjects: int
    r: float = math.nan
    skipped: str = ""


@dataclass(frozen=True)
class TestRetest:
    __test__ = False

    mean_r: float
    pairs: tuple

    @property
    def valid_pairs(self):
        return [p for p in self.pairs if not p.skipped]


def _aligned(data, measure, a, b):
    va = data.session_values(measure, a)
    vb = data.session_values(measure, b)
    common = sorted(set(va) & set(vb))
    return np.array([va[s] for s in common]), np.array([vb[s] for s in common])


def average_test_retest(data, measure, window=None, pairing="all", method="pearson", fisher_z=False):
    """Unweighted mean across-subject correlation over session pairs.

    Subjects missing either session of a pair are dropped for that pair
    only. Pairs with fewer than 3 common subjects or zero variance are
    skipped and reported.

    Raises
    ------
    ReliabilityError
        If no session pair yields a correlation.
    """
    corr = {"pearson": pearson, "spearman": spearman}[method]
    sessions = select_window(data.sessions(measure), window)
    if len(sessions) < 2:
        raise ReliabilityError(f"measure {measure!r}: need at least 2 sessions in window, got {sessions}")
    pairs = []
    for a, b in session_pairs(sessions, pairing):
        xa, xb = _aligned(data, measure, a, b)
        if xa.size < MIN_SUBJECTS:
            pairs.append(PairCorrelation(a, b, int(xa.size), skipped="too few subjects"))
            continue
        try:
            pairs.append(PairCorrelation(a, b, int(xa.size), corr(xa, xb)))
        except DegenerateSampleError:
            pairs.append(PairCorrelation(a, b, int(xa.size), skipped="zero variance"))
    rs = np.array([p.r for p in pairs if not p.skipped])
    if rs.size == 0:
        counts = ", ".join(f"({p.session_a},{p.session_b}): {p.n_subjects}" for p in pairs)
        raise ReliabilityError(f"measure {measure!r}: no valid session pair; subject counts {counts}")
    if fisher_z:
        mean_r = float(np.tanh(np.mean(np.arctanh(np.clip(rs, -1 + 1e-15, 1 - 1e-15)))))
    else:
        mean_r = float(rs.mean())
    return TestRetest(mean_r, tuple(pairs))


@dataclass(frozen=True)
class PairedTTest:
    t: float
    p_value: float
    df: int
    mean_before: float
    mean_after: float

    def to_dict(self):
        return {"t": self.t, "p": self.p_value, "df": self.df,
                "mean_before": self.mean_before, "mean_after": self.mean_after}


def paired_t_test(before, after):
    """Two-sided paired-samples t-test on ``after - before``.

    Raises
    ------
    DegenerateSampleError
        If all differences are identical (the statistic is undefined).
    """
    b = as_sample(before, "before", min_size=2)
    a = as_sample(after, "after", min_size=2)
    if a.size != b.size:
        raise DomainError(f"length mismatch: {b.size} vs {a.size}")
    d = a - b
    sd = float(d.std(ddof=1))
    if not sd > 0 or np.all(d == d[0]):
        raise DegenerateSampleError("differences have zero variance; the t statistic is undefined")
    n = d.size
    t = float(d.mean()) / (sd / math.sqrt(n))
    p = float(2.0 * stats.t.sf(abs(t), n - 1))
    return PairedTTest(t, min(p, 1.0), n - 1, float(b.mean()), float(a.mean()))


def _log_or_logit(x):
    if np.all((x > 0) & (x < 1)):
        return logit_transform(x)
    return log_transform(x)


def _boxcox_fitted(x):
    return boxcox(x, fit_boxcox(x).params)


TRANSFORMS = {
    "rank-normal": lambda x: gaussianize(x)[0],
    "log": log_transform,
    "logit": logit_transform,
    "log-logit": _log_or_logit,
    "boxcox": _boxcox_fitted,
}


@dataclass(frozen=True)
class MeasureReliability:
    measure: str
    r_raw: float
    r_transformed: dict
    spearman: float
    pair_count: int
    subject_counts: tuple

    def to_dict(self):
        return {
            "measure": self.measure,
            "r_raw": self.r_raw,
            "r_transformed": dict(self.r_transformed),
            "spearman": self.spearman,
            "pair_count": self.pair_count,
            "subject_counts": list(self.subject_counts),
        }


@dataclass(frozen=True)
class ReliabilityReport:
    measures: tuple
    comparisons: dict
    transforms: tuple
    sessions: tuple
    pairing: str
    fisher_z: bool = False
    per_session_fit: bool = False
    notes: tuple = field(default=(INDEPENDENCE_CAVEAT,))

    def measure(self, name):
        for m in self.measures:
            if m.measure == name:
                return m
        raise KeyError(name)

    def to_dict(self):
        comps = []
        for name, result in self.comparisons.items():
            before, _, after = name.partition("_vs_")
            entry = {"name": name, "before": before, "after": after}
            if isinstance(result, PairedTTest):
                entry.update(result.to_dict())
            else:
                entry["error"] = str(result)
            comps.append(entry)
        return {
            "pairing": self.pairing,
            "sessions": list(self.sessions),
            "transforms": list(self.transforms),
            "fisher_z": self.fisher_z,
            "per_session_fit": self.per_session_fit,
            "measures": [m.to_dict() for m in self.measures],
            "comparisons": comps,
            "notes": list(self.notes),
        }


def reliability_study(data, transforms=("rank-normal",), window=None, pairing="all",
                      per_session_fit=False, fisher_z=False, measures=None):
    """Average test-retest correlations per measure, raw and transformed.

    Each transform is fitted on the pooled values of a measure across all
    sessions and then applied to every session. ``per_session_fit=True``
    fits separately per session instead; for the rank-normal transform
    that forces identical score sets in every session and inflates r, so
    it exists only to demonstrate the effect.

    Comparisons (paired t-tests across measures) are ``raw_vs_<transform>``
    for each transform, plus ``spearman_vs_rank-normal`` when rank-normal
    is requested. They need at least two measures.
    """
    for name in transforms:
        if name not in TRANSFORMS:
            raise DomainError(f"unknown transform {name!r}; choose from {sorted(TRANSFORMS)}")
    available = data.measures()
    names = available if measures is None else list(measures)
    missing = [m for m in names if m not in available]
    if missing:
        raise ReliabilityError(f"measure {missing[0]!r} not in dataset")
    results = []
    sessions_used = set()
    for m in names:
        try:
            raw = average_test_retest(data, m, window, pairing, fisher_z=fisher_z)
            rho = average_test_retest(data, m, window, pairing, method="spearman", fisher_z=fisher_z)
            transformed = {}
            for t in transforms:
                tdata = data.replace_values(m, TRANSFORMS[t], per_session=per_session_fit)
                transformed[t] = average_test_retest(tdata, m, window, pairing, fisher_z=fisher_z).mean_r
        except ReliabilityError:
            raise
        except GaussianizeError as exc:
            raise ReliabilityError(f"measure {m!r}: {exc}") from exc
        valid = raw.valid_pairs
        sessions_used.update(s for p in valid for s in (p.session_a, p.session_b))
        results.append(MeasureReliability(
            m, raw.mean_r, transformed, rho.mean_r, len(valid), tuple(p.n_subjects for p in valid)
        ))

    comparisons = {}
    if len(results) >= 2:
        r_raw = [r.r_raw for r in results]
        for t in transforms:
            comparisons[f"raw_vs_{t}"] = _safe_ttest(r_raw, [r.r_transformed[t] for r in results])
        if "rank-normal" in transforms:
            comparisons["spearman_vs_rank-normal"] = _safe_ttest(
                [r.spearman for r in results], [r.r_transformed["rank-normal"] for r in results]
            )
    return ReliabilityReport(
        tuple(results), comparisons, tuple(transforms), tuple(sorted(sessions_used)),
        pairing, fisher_z, per_session_fit,
    )


def _safe_ttest(before, after):
    try:
        return paired_t_test(before, after)
    except DegenerateSampleError as exc:
        return exc
